#include "chainplace/model.hpp"

#include <algorithm>
#include <queue>
#include <tuple>

#include <fmt/format.h>

namespace chainplace {

namespace {

constexpr double kEps = 1e-9;

bool arity_ok(const ResourceVector& v, const SubstrateGraph& g) {
    return v.size() == g.resource_kinds.size();
}

}  // namespace

std::vector<std::string> SubstrateGraph::host_ids_sorted() const {
    std::vector<std::string> out;
    for (const auto& n : nodes)
        if (n.kind == NodeKind::Host) out.push_back(n.id);
    std::sort(out.begin(), out.end());
    return out;
}

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "OPTIMAL";
        case SolveStatus::Infeasible: return "INFEASIBLE";
        case SolveStatus::Timeout: return "TIMEOUT";
    }
    return "INFEASIBLE";
}

SolveStatus solve_status_from_string(const std::string& s) {
    if (s == "OPTIMAL") return SolveStatus::Optimal;
    if (s == "INFEASIBLE") return SolveStatus::Infeasible;
    if (s == "TIMEOUT") return SolveStatus::Timeout;
    throw Error("UnknownStatus", "unrecognized solve status '" + s + "'");
}

std::string to_string(PairMode m) {
    return m == PairMode::Direct ? "DIRECT" : "LOGICAL_MESH";
}

PairMode pair_mode_from_string(const std::string& s) {
    if (s == "DIRECT") return PairMode::Direct;
    if (s == "LOGICAL_MESH") return PairMode::LogicalMesh;
    throw Error("UnknownPairMode", "unrecognized pair mode '" + s + "'");
}

std::vector<ValidationError> validate(const SubstrateGraph& graph,
                                      const std::vector<SliceRequest>& requests) {
    std::vector<ValidationError> errs;
    auto add = [&](std::string code, std::string subject, std::string message) {
        errs.push_back({std::move(code), std::move(subject), std::move(message)});
    };

    std::set<std::string> node_ids;
    for (const auto& n : graph.nodes) {
        if (!node_ids.insert(n.id).second)
            add("DuplicateNodeId", n.id, "node id appears more than once");
        if (!arity_ok(n.capacity, graph))
            add("ResourceArityMismatch", n.id,
                fmt::format("capacity has {} entries, graph declares {} resource kinds",
                            n.capacity.size(), graph.resource_kinds.size()));
        for (double c : n.capacity)
            if (c < 0) add("NegativeCapacity", n.id, "capacity entry below zero");
        if (n.kind == NodeKind::Connector)
            for (double c : n.capacity)
                if (c != 0) add("ConnectorWithCapacity", n.id, "connector capacity must be all-zero");
        if (n.characteristics.security_level < 0 || n.characteristics.iaas_id < 0)
            add("InvalidCharacteristics", n.id, "security_level and iaas_id must be non-negative");
    }

    std::set<PairKey> seen_links;
    for (const auto& l : graph.links) {
        if (!node_ids.count(l.a)) add("DanglingLink", l.a, "link endpoint refers to no node");
        if (!node_ids.count(l.b)) add("DanglingLink", l.b, "link endpoint refers to no node");
        if (l.a == l.b) add("SelfLink", l.a, "link with identical endpoints");
        else if (!seen_links.insert(canonical_pair(l.a, l.b)).second)
            add("DuplicateLink", l.a + "-" + l.b, "more than one link between the pair");
        if (l.bandwidth_capacity <= 0)
            add("InvalidLinkWeight", l.a + "-" + l.b, "bandwidth_capacity must be positive");
        if (l.latency < 0)
            add("InvalidLinkWeight", l.a + "-" + l.b, "latency must be non-negative");
    }

    // Connectivity over the undirected link set.
    if (!graph.nodes.empty()) {
        std::map<std::string, std::vector<std::string>> adj;
        for (const auto& l : graph.links)
            if (node_ids.count(l.a) && node_ids.count(l.b)) {
                adj[l.a].push_back(l.b);
                adj[l.b].push_back(l.a);
            }
        std::set<std::string> seen{graph.nodes.front().id};
        std::queue<std::string> q;
        q.push(graph.nodes.front().id);
        while (!q.empty()) {
            auto u = q.front();
            q.pop();
            for (const auto& v : adj[u])
                if (seen.insert(v).second) q.push(v);
        }
        for (const auto& n : graph.nodes)
            if (!seen.count(n.id))
                add("DisconnectedGraph", n.id, "node unreachable from '" + graph.nodes.front().id + "'");
    }

    std::set<std::string> slice_ids;
    for (const auto& sl : requests) {
        if (!slice_ids.insert(sl.slice_id).second)
            add("DuplicateSliceId", sl.slice_id, "slice id appears more than once");
        if (sl.sfcs.empty()) add("EmptySlice", sl.slice_id, "slice carries no SFCs");
        std::set<std::string> sfc_ids;
        for (const auto& sfc : sl.sfcs) {
            std::string sfc_label = sl.slice_id + "/" + sfc.id;
            if (!sfc_ids.insert(sfc.id).second)
                add("DuplicateSfcId", sfc_label, "SFC id appears more than once in its slice");
            if (sfc.nfs.empty()) add("EmptyChain", sfc_label, "SFC carries no NFs");
            if (sfc.latency_budget <= 0)
                add("InvalidLatencyBudget", sfc_label, "latency_budget must be positive");
            if (sfc.hop_bandwidth <= 0)
                add("InvalidHopBandwidth", sfc_label, "hop_bandwidth must be positive");
            for (const auto* ep : {&sfc.ingress_node, &sfc.egress_node})
                if (*ep && !node_ids.count(**ep))
                    add("UnknownEndpointNode", **ep, "endpoint of " + sfc_label + " refers to no node");
            std::set<std::string> nf_ids;
            for (const auto& nf : sfc.nfs) {
                std::string nf_label = sfc_label + "/" + nf.id;
                if (!nf_ids.insert(nf.id).second)
                    add("DuplicateNfId", nf_label, "NF id appears more than once in its SFC");
                if (!arity_ok(nf.demand, graph))
                    add("ResourceArityMismatch", nf_label, "demand arity differs from graph resource kinds");
                for (double d : nf.demand)
                    if (d < 0) add("NegativeDemand", nf_label, "demand entry below zero");
                if (nf.constraint.kind == PlacementConstraint::Kind::ExplicitSet)
                    for (const auto& id : nf.constraint.nodes) {
                        const auto* node = graph.find_node(id);
                        if (!node)
                            add("UnknownAuthorizedNode", id, nf_label + " authorizes a node that does not exist");
                        else if (node->kind != NodeKind::Host)
                            add("AuthorizedNodeNotHost", id, nf_label + " authorizes a connector");
                    }
            }
        }
    }
    return errs;
}

std::vector<std::string> authorized_nodes(const NFSpec& nf, const SubstrateGraph& graph) {
    std::vector<std::string> out;
    for (const auto& n : graph.nodes) {
        if (n.kind != NodeKind::Host) continue;
        bool ok = true;
        switch (nf.constraint.kind) {
            case PlacementConstraint::Kind::Unrestricted:
                break;
            case PlacementConstraint::Kind::ExplicitSet:
                ok = nf.constraint.nodes.count(n.id) > 0;
                break;
            case PlacementConstraint::Kind::Filter:
                if (nf.constraint.allowed_iaas)
                    ok = nf.constraint.allowed_iaas->count(n.characteristics.iaas_id) > 0;
                if (ok && nf.constraint.min_security_level)
                    ok = n.characteristics.security_level >= *nf.constraint.min_security_level;
                break;
        }
        if (ok) out.push_back(n.id);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t gamma(const std::vector<SliceRequest>& requests) {
    std::size_t n = 0;
    for (const auto& sl : requests)
        for (const auto& sfc : sl.sfcs) n += sfc.nfs.size();
    return n;
}

namespace {

struct Adjacency {
    // node id -> (neighbor, latency, bandwidth)
    std::map<std::string, std::vector<std::tuple<std::string, double, double>>> out;
};

Adjacency build_adjacency(const SubstrateGraph& g) {
    Adjacency a;
    for (const auto& n : g.nodes) a.out[n.id];
    for (const auto& l : g.links) {
        a.out[l.a].emplace_back(l.b, l.latency, l.bandwidth_capacity);
        a.out[l.b].emplace_back(l.a, l.latency, l.bandwidth_capacity);
    }
    for (auto& [_, v] : a.out) std::sort(v.begin(), v.end());
    return a;
}

struct PathResult {
    double dist = std::numeric_limits<double>::infinity();
    double bottleneck = -std::numeric_limits<double>::infinity();
    std::string parent;  // empty at the source
};

// Min-latency paths from `src`; among latency ties, the widest bottleneck.
// Parent pointers reconstruct one canonical such path (lexicographically
// smallest predecessor on exact ties, fixed while the node is unsettled, so
// the pointers follow settle order and cannot cycle even across
// zero-latency links).
std::map<std::string, PathResult> widest_shortest(const SubstrateGraph& g, const Adjacency& adj,
                                                  const std::string& src) {
    std::map<std::string, PathResult> res;
    for (const auto& n : g.nodes) res[n.id];
    res[src].dist = 0.0;
    res[src].bottleneck = unbounded_bandwidth();

    using Key = std::tuple<double, double, std::string>;  // (dist, -bottleneck, id)
    std::priority_queue<Key, std::vector<Key>, std::greater<>> pq;
    pq.emplace(0.0, -unbounded_bandwidth(), src);
    std::set<std::string> settled;

    while (!pq.empty()) {
        auto [d, nb, u] = pq.top();
        pq.pop();
        if (!settled.insert(u).second) continue;
        if (d > res[u].dist + kEps) continue;  // stale entry
        for (const auto& [v, lat, bw] : adj.out.at(u)) {
            if (settled.count(v)) continue;
            double nd = res[u].dist + lat;
            double nbot = std::min(res[u].bottleneck, bw);
            auto& rv = res[v];
            bool better = nd < rv.dist - kEps ||
                          (nd < rv.dist + kEps && nbot > rv.bottleneck + kEps);
            bool equal = !better && nd < rv.dist + kEps &&
                         std::abs(nbot - rv.bottleneck) <= kEps;
            if (better) {
                rv.dist = nd;
                rv.bottleneck = nbot;
                rv.parent = u;
                pq.emplace(nd, -nbot, v);
            } else if (equal && (rv.parent.empty() || u < rv.parent)) {
                rv.parent = u;
            }
        }
    }
    return res;
}

std::vector<std::string> reconstruct(const std::map<std::string, PathResult>& res,
                                     const std::string& src, const std::string& dst) {
    std::vector<std::string> path{dst};
    std::string cur = dst;
    while (cur != src) {
        cur = res.at(cur).parent;
        if (cur.empty()) throw Error("UnroutableHop", "no path toward '" + dst + "'");
        path.push_back(cur);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace

std::map<PairKey, PairInfo> eligible_pairs(const SubstrateGraph& graph, PairMode mode) {
    std::map<PairKey, PairInfo> out;
    if (mode == PairMode::Direct) {
        for (const auto& l : graph.links) {
            out[{l.a, l.b}] = {l.latency, l.bandwidth_capacity};
            out[{l.b, l.a}] = {l.latency, l.bandwidth_capacity};
        }
        for (const auto& n : graph.nodes) out[{n.id, n.id}] = {0.0, unbounded_bandwidth()};
        return out;
    }
    auto adj = build_adjacency(graph);
    auto hosts = graph.host_ids_sorted();
    for (const auto& u : hosts) {
        auto res = widest_shortest(graph, adj, u);
        for (const auto& v : hosts) {
            if (u == v) {
                out[{u, u}] = {0.0, unbounded_bandwidth()};
                continue;
            }
            const auto& r = res.at(v);
            if (std::isinf(r.dist))
                throw Error("DisconnectedGraph", "no path between hosts '" + u + "' and '" + v + "'");
            out[{u, v}] = {r.dist, r.bottleneck};
        }
    }
    return out;
}

std::vector<ChainElement> effective_chain(const SFCSpec& sfc, bool pin_endpoints) {
    std::vector<ChainElement> chain;
    if (pin_endpoints && sfc.ingress_node)
        chain.push_back({"__ingress", -1, *sfc.ingress_node, true});
    for (int i = 0; i < static_cast<int>(sfc.nfs.size()); ++i)
        chain.push_back({sfc.nfs[i].id, i, "", false});
    if (pin_endpoints && sfc.egress_node)
        chain.push_back({"__egress", -1, *sfc.egress_node, true});
    return chain;
}

SubstrateGraph residual_apply(const SubstrateGraph& graph,
                              const std::vector<SliceRequest>& requests,
                              const PlacementSolution& solution, PairMode mode) {
    SubstrateGraph out = graph;

    std::map<std::string, SubstrateNode*> by_id;
    for (auto& n : out.nodes) by_id[n.id] = &n;
    std::map<PairKey, SubstrateLink*> link_by_pair;
    for (auto& l : out.links) link_by_pair[canonical_pair(l.a, l.b)] = &l;

    std::map<NfKey, const NFSpec*> nf_by_key;
    std::map<std::pair<std::string, std::string>, double> hop_bw;
    for (const auto& sl : requests)
        for (const auto& sfc : sl.sfcs) {
            hop_bw[{sl.slice_id, sfc.id}] = sfc.hop_bandwidth;
            for (const auto& nf : sfc.nfs) nf_by_key[{sl.slice_id, sfc.id, nf.id}] = &nf;
        }

    for (const auto& [key, node_id] : solution.assignment) {
        auto it = nf_by_key.find(key);
        if (it == nf_by_key.end())
            throw Error("UnknownNf", fmt::format("assignment names NF {}/{}/{} absent from the requests",
                                                 key.slice, key.sfc, key.nf));
        auto nit = by_id.find(node_id);
        if (nit == by_id.end())
            throw Error("UnknownNode", "assignment targets node '" + node_id + "' absent from the graph");
        auto& cap = nit->second->capacity;
        const auto& dem = it->second->demand;
        for (std::size_t r = 0; r < cap.size() && r < dem.size(); ++r) {
            cap[r] -= dem[r];
            if (cap[r] < -kEps)
                throw Error("NegativeResidual",
                            fmt::format("node '{}' {} over-consumed", node_id, out.resource_kinds[r]));
            cap[r] = std::max(cap[r], 0.0);
        }
    }

    auto charge_link = [&](const std::string& u, const std::string& v, double w,
                           const HopKey& hop) {
        auto lit = link_by_pair.find(canonical_pair(u, v));
        if (lit == link_by_pair.end())
            throw Error("UnknownLink",
                        fmt::format("hop {}/{}#{} routed over pair ({}, {}) with no physical link",
                                    hop.slice, hop.sfc, hop.hop, u, v));
        auto& bw = lit->second->bandwidth_capacity;
        bw -= w;
        if (bw < -kEps)
            throw Error("NegativeResidual",
                        fmt::format("link {}-{} bandwidth over-consumed", lit->second->a, lit->second->b));
        bw = std::max(bw, 0.0);
    };

    std::optional<Adjacency> adj;
    std::map<std::string, std::map<std::string, PathResult>> mesh_cache;

    for (const auto& [hop, pair] : solution.routing) {
        const auto& [u, v] = pair;
        if (u == v) continue;  // co-located NFs traverse no link
        auto wit = hop_bw.find({hop.slice, hop.sfc});
        if (wit == hop_bw.end())
            throw Error("UnknownNf",
                        fmt::format("routing names SFC {}/{} absent from the requests", hop.slice, hop.sfc));
        double w = wit->second;
        if (mode == PairMode::Direct) {
            charge_link(u, v, w, hop);
        } else {
            // Charge every physical link of the canonical min-latency path.
            if (!adj) adj = build_adjacency(graph);
            auto [mit, fresh] = mesh_cache.try_emplace(u);
            if (fresh) mit->second = widest_shortest(graph, *adj, u);
            auto path = reconstruct(mit->second, u, v);
            for (std::size_t i = 1; i < path.size(); ++i)
                charge_link(path[i - 1], path[i], w, hop);
        }
    }
    return out;
}

}  // namespace chainplace
