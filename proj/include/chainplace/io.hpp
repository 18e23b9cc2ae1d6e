#pragma once

// JSON document IO. One document per file, versioned with a mandatory
// `"format": 1` key. Schemas are documented in docs/file-formats.md.

#include <optional>
#include <string>
#include <vector>

#include "chainplace/model.hpp"

namespace chainplace {

// A slice request inside an orchestration sequence; `at` is an optional
// timestamp annotation echoed into the event log, not a scheduling device —
// requests are processed in file order.
struct TimedRequest {
    std::optional<double> at;
    SliceRequest request;
};

Instance instance_from_json_text(const std::string& text);
std::string instance_to_json_text(const Instance& instance);
Instance load_instance(const std::string& path);
void save_instance(const Instance& instance, const std::string& path);

PlacementSolution solution_from_json_text(const std::string& text);
std::string solution_to_json_text(const PlacementSolution& solution);
PlacementSolution load_solution(const std::string& path);
void save_solution(const PlacementSolution& solution, const std::string& path);

std::vector<TimedRequest> sequence_from_json_text(const std::string& text);
std::string sequence_to_json_text(const std::vector<TimedRequest>& requests);
std::vector<TimedRequest> load_request_sequence(const std::string& path);
void save_request_sequence(const std::vector<TimedRequest>& requests, const std::string& path);

std::string read_text_file(const std::string& path);   // Error("FileNotFound")
void write_text_file(const std::string& path, const std::string& text);

}  // namespace chainplace
