#include "chainplace/io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace chainplace {

using nlohmann::json;

namespace {

json parse_text(const std::string& text) {
    json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw Error("ParseError", "document is not well-formed JSON");
    if (!j.is_object()) throw Error("SchemaError", "top level must be an object");
    if (!j.contains("format") || !j["format"].is_number_integer())
        throw Error("MissingFormatKey", "mandatory integer key 'format' absent");
    if (j["format"].get<int>() != 1)
        throw Error("UnsupportedFormat",
                    fmt::format("format {} not supported (expected 1)", j["format"].get<int>()));
    return j;
}

double require_number(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_number())
        throw Error("SchemaError", fmt::format("{}: missing numeric '{}'", where, key));
    return j[key].get<double>();
}

std::string require_string(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_string())
        throw Error("SchemaError", fmt::format("{}: missing string '{}'", where, key));
    return j[key].get<std::string>();
}

const json& require_array(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_array())
        throw Error("SchemaError", fmt::format("{}: missing array '{}'", where, key));
    return j[key];
}

ResourceVector parse_resource_vector(const json& j, const std::string& where) {
    if (!j.is_array()) throw Error("SchemaError", where + ": resource vector must be an array");
    ResourceVector v;
    for (const auto& x : j) {
        if (!x.is_number()) throw Error("SchemaError", where + ": resource entries must be numbers");
        v.push_back(x.get<double>());
    }
    return v;
}

SliceRequest parse_slice(const json& js) {
    SliceRequest sl;
    sl.slice_id = require_string(js, "slice_id", "slice");
    if (js.contains("revision")) sl.revision = js["revision"].get<std::int64_t>();
    for (const auto& jc : require_array(js, "sfcs", "slice " + sl.slice_id)) {
        SFCSpec sfc;
        std::string where = "slice " + sl.slice_id;
        sfc.id = require_string(jc, "id", where);
        where += "/" + sfc.id;
        sfc.latency_budget = require_number(jc, "latency_budget", where);
        sfc.hop_bandwidth = require_number(jc, "hop_bandwidth", where);
        if (jc.contains("ingress_node")) sfc.ingress_node = jc["ingress_node"].get<std::string>();
        if (jc.contains("egress_node")) sfc.egress_node = jc["egress_node"].get<std::string>();
        for (const auto& jn : require_array(jc, "nfs", where)) {
            NFSpec nf;
            nf.id = require_string(jn, "id", where);
            nf.demand = parse_resource_vector(
                jn.contains("demand") ? jn["demand"] : json::array(), where + "/" + nf.id);
            if (jn.contains("authorized")) {
                std::set<std::string> ids;
                for (const auto& x : jn["authorized"]) ids.insert(x.get<std::string>());
                nf.constraint = PlacementConstraint::explicit_set(std::move(ids));
            } else if (jn.contains("filter")) {
                const auto& jf = jn["filter"];
                std::optional<std::set<int>> iaas;
                std::optional<int> sec;
                if (jf.contains("allowed_iaas")) {
                    iaas.emplace();
                    for (const auto& x : jf["allowed_iaas"]) iaas->insert(x.get<int>());
                }
                if (jf.contains("min_security_level")) sec = jf["min_security_level"].get<int>();
                nf.constraint = PlacementConstraint::filter(std::move(iaas), sec);
            }
            sfc.nfs.push_back(std::move(nf));
        }
        sl.sfcs.push_back(std::move(sfc));
    }
    return sl;
}

json slice_to_json(const SliceRequest& sl) {
    json js;
    js["slice_id"] = sl.slice_id;
    js["revision"] = sl.revision;
    js["sfcs"] = json::array();
    for (const auto& sfc : sl.sfcs) {
        json jc;
        jc["id"] = sfc.id;
        jc["latency_budget"] = sfc.latency_budget;
        jc["hop_bandwidth"] = sfc.hop_bandwidth;
        if (sfc.ingress_node) jc["ingress_node"] = *sfc.ingress_node;
        if (sfc.egress_node) jc["egress_node"] = *sfc.egress_node;
        jc["nfs"] = json::array();
        for (const auto& nf : sfc.nfs) {
            json jn;
            jn["id"] = nf.id;
            jn["demand"] = nf.demand;
            switch (nf.constraint.kind) {
                case PlacementConstraint::Kind::Unrestricted:
                    break;
                case PlacementConstraint::Kind::ExplicitSet:
                    jn["authorized"] = nf.constraint.nodes;
                    break;
                case PlacementConstraint::Kind::Filter: {
                    json jf = json::object();
                    if (nf.constraint.allowed_iaas) jf["allowed_iaas"] = *nf.constraint.allowed_iaas;
                    if (nf.constraint.min_security_level)
                        jf["min_security_level"] = *nf.constraint.min_security_level;
                    jn["filter"] = jf;
                    break;
                }
            }
            jc["nfs"].push_back(std::move(jn));
        }
        js["sfcs"].push_back(std::move(jc));
    }
    return js;
}

}  // namespace

Instance instance_from_json_text(const std::string& text) {
    json j = parse_text(text);
    Instance inst;
    if (j.contains("resources")) {
        for (const auto& r : j["resources"]) inst.graph.resource_kinds.push_back(r.get<std::string>());
    } else {
        inst.graph.resource_kinds = {"cpu", "ram", "disk"};
    }
    for (const auto& jn : require_array(j, "nodes", "instance")) {
        SubstrateNode n;
        n.id = require_string(jn, "id", "node");
        std::string kind = jn.contains("kind") ? jn["kind"].get<std::string>() : "host";
        if (kind == "host") n.kind = NodeKind::Host;
        else if (kind == "connector") n.kind = NodeKind::Connector;
        else throw Error("SchemaError", fmt::format("node {}: unknown kind '{}'", n.id, kind));
        if (jn.contains("capacity"))
            n.capacity = parse_resource_vector(jn["capacity"], "node " + n.id);
        else if (n.kind == NodeKind::Connector)
            n.capacity.assign(inst.graph.resource_kinds.size(), 0.0);
        else
            throw Error("SchemaError", fmt::format("node {}: host without 'capacity'", n.id));
        if (jn.contains("security_level"))
            n.characteristics.security_level = jn["security_level"].get<int>();
        if (jn.contains("iaas_id")) n.characteristics.iaas_id = jn["iaas_id"].get<int>();
        inst.graph.nodes.push_back(std::move(n));
    }
    for (const auto& jl : require_array(j, "links", "instance")) {
        SubstrateLink l;
        l.a = require_string(jl, "a", "link");
        l.b = require_string(jl, "b", "link");
        l.bandwidth_capacity = require_number(jl, "bandwidth_capacity", "link " + l.a + "-" + l.b);
        l.latency = require_number(jl, "latency", "link " + l.a + "-" + l.b);
        inst.graph.links.push_back(std::move(l));
    }
    if (j.contains("slices"))
        for (const auto& js : j["slices"]) inst.slices.push_back(parse_slice(js));
    return inst;
}

std::string instance_to_json_text(const Instance& instance) {
    json j;
    j["format"] = 1;
    j["resources"] = instance.graph.resource_kinds;
    j["nodes"] = json::array();
    for (const auto& n : instance.graph.nodes) {
        json jn;
        jn["id"] = n.id;
        jn["kind"] = n.kind == NodeKind::Host ? "host" : "connector";
        jn["capacity"] = n.capacity;
        jn["security_level"] = n.characteristics.security_level;
        jn["iaas_id"] = n.characteristics.iaas_id;
        j["nodes"].push_back(std::move(jn));
    }
    j["links"] = json::array();
    for (const auto& l : instance.graph.links) {
        json jl;
        jl["a"] = l.a;
        jl["b"] = l.b;
        jl["bandwidth_capacity"] = l.bandwidth_capacity;
        jl["latency"] = l.latency;
        j["links"].push_back(std::move(jl));
    }
    j["slices"] = json::array();
    for (const auto& sl : instance.slices) j["slices"].push_back(slice_to_json(sl));
    return j.dump(2) + "\n";
}

PlacementSolution solution_from_json_text(const std::string& text) {
    json j = parse_text(text);
    PlacementSolution sol;
    sol.status = solve_status_from_string(require_string(j, "status", "solution"));
    if (j.contains("objective")) sol.objective = j["objective"].get<int>();
    if (j.contains("diagnostics")) sol.diagnostics = j["diagnostics"].get<std::string>();
    if (j.contains("active_nodes"))
        for (const auto& x : j["active_nodes"]) sol.active_nodes.insert(x.get<std::string>());
    if (j.contains("assignment"))
        for (const auto& ja : j["assignment"]) {
            NfKey key{require_string(ja, "slice", "assignment"), require_string(ja, "sfc", "assignment"),
                      require_string(ja, "nf", "assignment")};
            sol.assignment[key] = require_string(ja, "node", "assignment");
        }
    if (j.contains("routing"))
        for (const auto& jr : j["routing"]) {
            HopKey key{require_string(jr, "slice", "routing"), require_string(jr, "sfc", "routing"),
                       static_cast<int>(require_number(jr, "hop", "routing"))};
            sol.routing[key] = {require_string(jr, "u", "routing"), require_string(jr, "v", "routing")};
            if (jr.contains("latency_budget"))
                sol.hop_latency_budget[key] = jr["latency_budget"].get<double>();
        }
    return sol;
}

std::string solution_to_json_text(const PlacementSolution& solution) {
    json j;
    j["format"] = 1;
    j["status"] = to_string(solution.status);
    j["objective"] = solution.objective;
    j["active_nodes"] = solution.active_nodes;
    j["assignment"] = json::array();
    for (const auto& [key, node] : solution.assignment) {
        json ja;
        ja["slice"] = key.slice;
        ja["sfc"] = key.sfc;
        ja["nf"] = key.nf;
        ja["node"] = node;
        j["assignment"].push_back(std::move(ja));
    }
    j["routing"] = json::array();
    for (const auto& [key, pair] : solution.routing) {
        json jr;
        jr["slice"] = key.slice;
        jr["sfc"] = key.sfc;
        jr["hop"] = key.hop;
        jr["u"] = pair.first;
        jr["v"] = pair.second;
        auto bit = solution.hop_latency_budget.find(key);
        if (bit != solution.hop_latency_budget.end()) jr["latency_budget"] = bit->second;
        j["routing"].push_back(std::move(jr));
    }
    if (!solution.diagnostics.empty()) j["diagnostics"] = solution.diagnostics;
    return j.dump(2) + "\n";
}

std::vector<TimedRequest> sequence_from_json_text(const std::string& text) {
    json j = parse_text(text);
    std::vector<TimedRequest> out;
    for (const auto& jr : require_array(j, "requests", "sequence")) {
        TimedRequest tr;
        if (jr.contains("at")) tr.at = jr["at"].get<double>();
        tr.request = parse_slice(jr);
        out.push_back(std::move(tr));
    }
    return out;
}

std::string sequence_to_json_text(const std::vector<TimedRequest>& requests) {
    json j;
    j["format"] = 1;
    j["requests"] = json::array();
    for (const auto& tr : requests) {
        json jr = slice_to_json(tr.request);
        if (tr.at) jr["at"] = *tr.at;
        j["requests"].push_back(std::move(jr));
    }
    return j.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("FileNotFound", "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("FileNotFound", "cannot write '" + path + "'");
    out << text;
}

Instance load_instance(const std::string& path) {
    try {
        return instance_from_json_text(read_text_file(path));
    } catch (const Error& e) {
        throw Error(e.code(), fmt::format("{}: {}", path, e.message()));
    }
}

void save_instance(const Instance& instance, const std::string& path) {
    write_text_file(path, instance_to_json_text(instance));
}

PlacementSolution load_solution(const std::string& path) {
    try {
        return solution_from_json_text(read_text_file(path));
    } catch (const Error& e) {
        throw Error(e.code(), fmt::format("{}: {}", path, e.message()));
    }
}

void save_solution(const PlacementSolution& solution, const std::string& path) {
    write_text_file(path, solution_to_json_text(solution));
}

std::vector<TimedRequest> load_request_sequence(const std::string& path) {
    try {
        return sequence_from_json_text(read_text_file(path));
    } catch (const Error& e) {
        throw Error(e.code(), fmt::format("{}: {}", path, e.message()));
    }
}

void save_request_sequence(const std::vector<TimedRequest>& requests, const std::string& path) {
    write_text_file(path, sequence_to_json_text(requests));
}

}  // namespace chainplace
