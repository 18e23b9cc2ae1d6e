// Python module over the placement engine. Deliberately string-in /
// string-out: every payload crosses the boundary as the same JSON / CSV /
// JSONL documents the CLI reads and writes (see docs/file-formats.md), so the
// module stays schema-stable without mirroring the C++ structs in Python.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <optional>

#include "chainplace/experiments.hpp"
#include "chainplace/io.hpp"
#include "chainplace/milp.hpp"
#include "chainplace/model.hpp"
#include "chainplace/orchestrator.hpp"
#include "chainplace/scenario.hpp"
#include "chainplace/solver.hpp"
#include "chainplace/verifier.hpp"

namespace py = pybind11;
using namespace chainplace;

namespace {

PairMode parse_mode(const std::string& mode) {
    if (mode == "direct") return PairMode::Direct;
    if (mode == "mesh") return PairMode::LogicalMesh;
    throw Error("InvalidMode", "expected 'direct' or 'mesh', got '" + mode + "'");
}

BuildConfig make_config(const std::string& mode, bool pin_endpoints) {
    BuildConfig config;
    config.mode = parse_mode(mode);
    config.pin_endpoints = pin_endpoints;
    return config;
}

std::string solve_json(const std::string& instance_json, const std::string& mode,
                       bool pin_endpoints, double time_limit, int workers) {
    const auto config = make_config(mode, pin_endpoints);
    const auto inst = instance_from_json_text(instance_json);
    SolverLimits limits;
    limits.time_budget = time_limit;
    limits.workers = workers;
    PlacementSolution solution;
    {
        py::gil_scoped_release release;
        solution = solve_exact(inst.graph, inst.slices, config, limits);
    }
    return solution_to_json_text(solution);
}

std::pair<bool, std::string> verify_json(const std::string& instance_json,
                                         const std::string& solution_json,
                                         const std::string& mode, bool pin_endpoints) {
    const auto inst = instance_from_json_text(instance_json);
    const auto solution = solution_from_json_text(solution_json);
    const auto report = verify(inst.graph, inst.slices, solution, make_config(mode, pin_endpoints));
    return {report.overall, to_text(report)};
}

std::string export_lp_json(const std::string& instance_json, const std::string& mode,
                           bool pin_endpoints) {
    const auto inst = instance_from_json_text(instance_json);
    return export_lp(build_model(inst.graph, inst.slices, make_config(mode, pin_endpoints)).model);
}

std::string gen_instance_json(const std::string& params_json, int slices, int sfcs, int nfs,
                              std::optional<std::uint64_t> seed) {
    auto params = gen_params_from_json_text(params_json);
    if (seed) params.seed = *seed;
    Instance inst;
    inst.graph = gen_substrate(params);
    if (slices > 0 || sfcs > 0 || nfs > 0)
        inst.slices =
            gen_requests(std::max(slices, 1), std::max(sfcs, 1), std::max(nfs, 1), params);
    return instance_to_json_text(inst);
}

std::string orchestrate_json(const std::string& substrate_json, const std::string& sequence_json,
                             const std::string& mode, double time_limit) {
    const auto sequence = sequence_from_json_text(sequence_json);
    OrchestratorState state;
    state.base = instance_from_json_text(substrate_json).graph;
    if (mode == "incremental")
        state.mode = OrchestratorMode::Incremental;
    else if (mode == "full")
        state.mode = OrchestratorMode::FullReopt;
    else
        throw Error("InvalidMode", "expected 'full' or 'incremental', got '" + mode + "'");
    state.limits.time_budget = time_limit;
    {
        py::gil_scoped_release release;
        std::size_t cursor = 0;
        run_loop(state, [&]() -> std::optional<TimedRequest> {
            if (cursor == sequence.size()) return std::nullopt;
            return sequence[cursor++];
        });
    }
    return event_log_to_jsonl(state.events);
}

std::string run_experiment_csv(const std::string& plan_text, std::uint64_t seed, int reps,
                               int points, int jobs, double time_limit) {
    const auto body = plan_text.find_first_not_of(" \t\r\n");
    ExperimentPlan plan = body != std::string::npos && plan_text[body] == '{'
                              ? plan_from_json_text(plan_text)
                              : preset(plan_text);
    if (reps > 0) plan.repetitions = reps;
    if (points > 0 && static_cast<std::size_t>(points) < plan.points.size())
        plan.points.resize(static_cast<std::size_t>(points));
    SolverLimits limits;
    if (time_limit > 0) limits.time_budget = time_limit;
    ExperimentResult result;
    {
        py::gil_scoped_release release;
        result = run_experiment(plan, seed, jobs, limits);
    }
    return records_to_csv(result.records);
}

std::string plot_from_csv(const std::string& records_csv) {
    const auto records = records_from_csv(records_csv);
    if (records.empty()) throw Error("EmptyRecords", "no records to plot");
    return plot_csv(records, swept_for(records.front().preset));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() =
        "Service-chain placement engine: exact active-node minimization on a "
        "substrate graph, plus the instance generator, orchestration loop and "
        "experiment runner. All payloads are the JSON/CSV documents described "
        "in docs/file-formats.md.";

    py::register_exception<Error>(m, "Error");

    m.def("solve", &solve_json, py::arg("instance_json"), py::kw_only(),
          py::arg("mode") = "direct", py::arg("pin_endpoints") = false,
          py::arg("time_limit") = 60.0, py::arg("workers") = 1,
          "Solve an instance document to proven optimality; returns the solution "
          "document (status, objective, assignment, routing, per-hop budgets).");

    m.def("verify", &verify_json, py::arg("instance_json"), py::arg("solution_json"),
          py::kw_only(), py::arg("mode") = "direct", py::arg("pin_endpoints") = false,
          "Independently check a solution document against an instance; returns "
          "(ok, per-family report text).");

    m.def("export_lp", &export_lp_json, py::arg("instance_json"), py::kw_only(),
          py::arg("mode") = "direct", py::arg("pin_endpoints") = false,
          "Encode an instance and return the LP text (Minimize/Subject To/Bounds/"
          "Binary/End), byte-stable for a given instance.");

    m.def("gen_instance", &gen_instance_json, py::arg("params_json"), py::kw_only(),
          py::arg("slices") = 0, py::arg("sfcs") = 0, py::arg("nfs") = 0,
          py::arg("seed") = std::nullopt,
          "Generate a random instance document from generator-parameter JSON; "
          "counts of 0 fall back to the params' optional requests block.");

    m.def("orchestrate", &orchestrate_json, py::arg("substrate_json"), py::arg("sequence_json"),
          py::kw_only(), py::arg("mode") = "incremental", py::arg("time_limit") = 60.0,
          "Feed a request sequence through the placement loop on the given "
          "substrate; returns the event log as JSONL.");

    m.def("run_experiment", &run_experiment_csv, py::arg("plan"), py::kw_only(), py::arg("seed"),
          py::arg("reps") = 0, py::arg("points") = 0, py::arg("jobs") = 1,
          py::arg("time_limit") = 0.0,
          "Run a sweep (preset name or plan JSON) and return the records CSV.");

    m.def("plot", &plot_from_csv, py::arg("records_csv"),
          "Aggregate a records CSV into the per-point plot CSV (mean, CI).");
}
