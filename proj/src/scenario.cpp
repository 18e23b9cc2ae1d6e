#include "chainplace/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include <fmt/format.h>
#include <json.hpp>

namespace chainplace {

namespace {

constexpr int kConnectivityRetries = 64;

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

void check_range(const ValueRange& r, const std::string& what) {
    if (!(r.lo <= r.hi))
        throw Error("InvalidParams", fmt::format("{} range [{}, {}] is empty", what, r.lo, r.hi));
}

void check_params(const GenParams& p) {
    if (p.n_hosts < 1) throw Error("InvalidParams", "need at least one host");
    if (p.n_connectors < 0) throw Error("InvalidParams", "negative connector count");
    if (!(p.connectivity >= 0.0 && p.connectivity <= 1.0))
        throw Error("InvalidParams", "connectivity must lie in [0, 1]");
    if (p.resource_kinds.empty()) throw Error("InvalidParams", "no resource kinds");
    if (p.host_capacity.size() != p.resource_kinds.size())
        throw Error("InvalidParams",
                    fmt::format("{} capacity ranges for {} resource kinds",
                                p.host_capacity.size(), p.resource_kinds.size()));
    for (std::size_t k = 0; k < p.host_capacity.size(); ++k)
        check_range(p.host_capacity[k], "capacity[" + p.resource_kinds[k] + "]");
    check_range(p.link_capacity, "link capacity");
    check_range(p.link_latency, "link latency");
    check_range(p.demand, "demand");
}

bool connected(const SubstrateGraph& g) {
    if (g.nodes.empty()) return true;
    std::map<std::string, std::vector<std::string>> adj;
    for (const auto& l : g.links) {
        adj[l.a].push_back(l.b);
        adj[l.b].push_back(l.a);
    }
    std::set<std::string> seen = {g.nodes.front().id};
    std::queue<std::string> q;
    q.push(g.nodes.front().id);
    while (!q.empty()) {
        auto u = q.front();
        q.pop();
        for (const auto& v : adj[u])
            if (seen.insert(v).second) q.push(v);
    }
    return seen.size() == g.nodes.size();
}

SubstrateGraph sample_substrate(const GenParams& p, Rng& rng) {
    SubstrateGraph g;
    g.resource_kinds = p.resource_kinds;
    for (int i = 0; i < p.n_hosts; ++i) {
        SubstrateNode n;
        n.id = fmt::format("n{:02}", i);
        n.kind = NodeKind::Host;
        for (const auto& range : p.host_capacity) n.capacity.push_back(rng.draw(range));
        g.nodes.push_back(std::move(n));
    }
    for (int i = 0; i < p.n_connectors; ++i) {
        SubstrateNode n;
        n.id = fmt::format("t{:02}", i);
        n.kind = NodeKind::Connector;
        n.capacity.assign(p.resource_kinds.size(), 0.0);
        g.nodes.push_back(std::move(n));
    }
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        for (std::size_t j = i + 1; j < g.nodes.size(); ++j) {
            if (!rng.chance(p.connectivity)) continue;
            g.links.push_back({g.nodes[i].id, g.nodes[j].id, rng.draw(p.link_capacity),
                               rng.draw(p.link_latency)});
        }
    return g;
}

}  // namespace

std::uint64_t Rng::next() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next() % span);
}

double Rng::draw(const ValueRange& r) {
    return static_cast<double>(
        uniform_int(static_cast<std::int64_t>(std::llround(r.lo)),
                    static_cast<std::int64_t>(std::llround(r.hi))));
}

bool Rng::chance(double p) {
    if (p >= 1.0) return true;
    return static_cast<double>(next() >> 11) * 0x1.0p-53 < p;
}

std::uint64_t Rng::derive(std::uint64_t seed, std::uint64_t stream) {
    return mix64(seed ^ mix64(stream + 1));
}

SubstrateGraph gen_substrate(const GenParams& params) {
    check_params(params);
    for (int attempt = 0; attempt < kConnectivityRetries; ++attempt) {
        Rng rng(Rng::derive(params.seed, static_cast<std::uint64_t>(attempt)));
        auto g = sample_substrate(params, rng);
        if (connected(g)) return g;
    }
    throw Error("GenerationFailed",
                fmt::format("no connected graph on {} nodes after {} attempts "
                            "(connectivity {})",
                            params.n_hosts + params.n_connectors, kConnectivityRetries,
                            params.connectivity));
}

std::vector<SliceRequest> gen_requests(int n_slices, int n_sfcs, int n_nfs,
                                       const GenParams& params) {
    check_params(params);
    if (n_slices < 1 || n_sfcs < 1 || n_nfs < 1)
        throw Error("InvalidParams", "slice, SFC and NF counts must all be at least 1");
    // A stream of its own so workload draws never shift when the substrate
    // sampler changes its consumption.
    Rng rng(Rng::derive(params.seed, 0x6e657473ull));
    std::vector<SliceRequest> out;
    for (int s = 0; s < n_slices; ++s) {
        SliceRequest req;
        req.slice_id = fmt::format("s{:02}", s);
        req.revision = 1;
        for (int c = 0; c < n_sfcs; ++c) {
            SFCSpec sfc;
            sfc.id = fmt::format("c{:02}", c);
            for (int f = 0; f < n_nfs; ++f) {
                NFSpec nf;
                nf.id = fmt::format("f{:02}", f);
                if (params.balanced_demand) {
                    nf.demand.assign(params.resource_kinds.size(), rng.draw(params.demand));
                } else {
                    for (std::size_t k = 0; k < params.resource_kinds.size(); ++k)
                        nf.demand.push_back(rng.draw(params.demand));
                }
                sfc.nfs.push_back(std::move(nf));
            }
            sfc.latency_budget = rng.draw(params.demand);
            sfc.hop_bandwidth = rng.draw(params.demand);
            req.sfcs.push_back(std::move(sfc));
        }
        out.push_back(std::move(req));
    }
    return out;
}

ExperimentPlan preset(const std::string& name) {
    ExperimentPlan plan;
    plan.name = name;
    if (name == "VARY_SLICES") {
        for (int s = 1; s <= 50; ++s) plan.points.push_back({s, 2, 4, 12});
    } else if (name == "VARY_SFCS") {
        for (int c = 2; c <= 20; ++c) plan.points.push_back({2, c, 4, 12});
    } else if (name == "VARY_NFS") {
        for (int f = 2; f <= 20; ++f) plan.points.push_back({5, 2, f, 12});
    } else if (name == "SCALE_COMPARE") {
        for (int s = 1; s <= 50; ++s) plan.points.push_back({s, 2, 4, 12});
        for (int s = 1; s <= 50; ++s) plan.points.push_back({s, 2, 4, 12 + 2 * (s - 1)});
    } else {
        throw Error("UnknownPreset", name);
    }
    return plan;
}

GenParams gen_params_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error("ParseError", e.what());
    }
    GenParams p;
    try {
        const auto range = [](const nlohmann::json& v) {
            return ValueRange{v.at(0).get<double>(), v.at(1).get<double>()};
        };
        if (j.contains("hosts")) p.n_hosts = j.at("hosts").get<int>();
        if (j.contains("connectors")) p.n_connectors = j.at("connectors").get<int>();
        if (j.contains("connectivity")) p.connectivity = j.at("connectivity").get<double>();
        if (j.contains("resource_kinds")) {
            p.resource_kinds = j.at("resource_kinds").get<std::vector<std::string>>();
            // Unless overridden below, reuse the default capacity range for
            // whatever kinds were named.
            p.host_capacity.assign(p.resource_kinds.size(), GenParams{}.host_capacity.front());
        }
        if (j.contains("host_capacity")) {
            p.host_capacity.clear();
            for (const auto& v : j.at("host_capacity")) p.host_capacity.push_back(range(v));
        }
        if (j.contains("link_capacity")) p.link_capacity = range(j.at("link_capacity"));
        if (j.contains("link_latency")) p.link_latency = range(j.at("link_latency"));
        if (j.contains("demand")) p.demand = range(j.at("demand"));
        if (j.contains("balanced_demand")) p.balanced_demand = j.at("balanced_demand").get<bool>();
        if (j.contains("seed")) p.seed = j.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw Error("ParseError", e.what());
    }
    check_params(p);
    return p;
}

std::string gen_params_to_json_text(const GenParams& params) {
    const auto range = [](const ValueRange& r) { return nlohmann::json{r.lo, r.hi}; };
    nlohmann::json j;
    j["hosts"] = params.n_hosts;
    j["connectors"] = params.n_connectors;
    j["connectivity"] = params.connectivity;
    j["resource_kinds"] = params.resource_kinds;
    auto& caps = j["host_capacity"] = nlohmann::json::array();
    for (const auto& r : params.host_capacity) caps.push_back(range(r));
    j["link_capacity"] = range(params.link_capacity);
    j["link_latency"] = range(params.link_latency);
    j["demand"] = range(params.demand);
    j["balanced_demand"] = params.balanced_demand;
    j["seed"] = params.seed;
    return j.dump(2) + "\n";
}

}  // namespace chainplace
