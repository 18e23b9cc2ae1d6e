#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chainplace {

// Error with a machine-readable code, e.g. "DanglingLink" or "NegativeResidual".
class Error : public std::runtime_error {
public:
    Error(std::string code, std::string message)
        : std::runtime_error(code + ": " + message),
          code_(std::move(code)),
          message_(std::move(message)) {}
    const std::string& code() const { return code_; }
    const std::string& message() const { return message_; }

private:
    std::string code_;
    std::string message_;
};

enum class NodeKind { Host, Connector };

struct NodeCharacteristics {
    int security_level = 0;
    int iaas_id = 0;
};

// Resource quantities are stored as a plain vector aligned with the owning
// graph's resource_kinds list (same order for every node and NF demand).
using ResourceVector = std::vector<double>;

struct SubstrateNode {
    std::string id;
    NodeKind kind = NodeKind::Host;
    ResourceVector capacity;
    NodeCharacteristics characteristics;
};

struct SubstrateLink {
    std::string a, b;   // unordered endpoints
    double bandwidth_capacity = 0.0;  // Mbps
    double latency = 0.0;             // ms
};

struct SubstrateGraph {
    std::vector<std::string> resource_kinds;  // e.g. {"cpu","ram","disk"}
    std::vector<SubstrateNode> nodes;
    std::vector<SubstrateLink> links;

    const SubstrateNode* find_node(const std::string& id) const {
        for (const auto& n : nodes)
            if (n.id == id) return &n;
        return nullptr;
    }
    std::vector<std::string> host_ids_sorted() const;
};

struct PlacementConstraint {
    enum class Kind { Unrestricted, ExplicitSet, Filter };
    Kind kind = Kind::Unrestricted;
    std::set<std::string> nodes;               // ExplicitSet
    std::optional<int> min_security_level;     // Filter
    std::optional<std::set<int>> allowed_iaas; // Filter

    static PlacementConstraint unrestricted() { return {}; }
    static PlacementConstraint explicit_set(std::set<std::string> ids) {
        PlacementConstraint c;
        c.kind = Kind::ExplicitSet;
        c.nodes = std::move(ids);
        return c;
    }
    static PlacementConstraint filter(std::optional<std::set<int>> iaas,
                                      std::optional<int> min_security) {
        PlacementConstraint c;
        c.kind = Kind::Filter;
        c.allowed_iaas = std::move(iaas);
        c.min_security_level = min_security;
        return c;
    }
};

struct NFSpec {
    std::string id;           // unique within its SFC
    ResourceVector demand;
    PlacementConstraint constraint;
};

struct SFCSpec {
    std::string id;
    std::vector<NFSpec> nfs;       // chain order
    double latency_budget = 0.0;   // ms, end to end
    double hop_bandwidth = 0.0;    // Mbps, on every virtual link
    std::optional<std::string> ingress_node;
    std::optional<std::string> egress_node;
};

struct SliceRequest {
    std::string slice_id;
    std::vector<SFCSpec> sfcs;
    std::int64_t revision = 1;
};

struct Instance {
    SubstrateGraph graph;
    std::vector<SliceRequest> slices;
};

enum class SolveStatus { Optimal, Infeasible, Timeout };

std::string to_string(SolveStatus s);
SolveStatus solve_status_from_string(const std::string& s);

struct NfKey {
    std::string slice, sfc, nf;
    auto operator<=>(const NfKey&) const = default;
};

// Hop h is the h-th virtual link of its SFC's effective chain (h in
// [1, n-1]); it joins the elements at 0-based positions h-1 and h. The
// effective chain includes endpoint pseudo-elements when endpoint pinning
// is on.
struct HopKey {
    std::string slice, sfc;
    int hop = 0;
    auto operator<=>(const HopKey&) const = default;
};

struct PlacementSolution {
    SolveStatus status = SolveStatus::Infeasible;
    int objective = 0;  // |active_nodes| when Optimal
    std::map<NfKey, std::string> assignment;
    std::map<HopKey, std::pair<std::string, std::string>> routing;
    std::map<HopKey, double> hop_latency_budget;
    std::set<std::string> active_nodes;
    std::string diagnostics;
};

struct ValidationError {
    std::string code;     // machine readable, e.g. "DanglingLink"
    std::string subject;  // offending id
    std::string message;
};

std::vector<ValidationError> validate(const SubstrateGraph& graph,
                                      const std::vector<SliceRequest>& requests);

// Resolved authorized-node set of one NF: host ids, sorted. May be empty
// (the instance is then trivially infeasible; callers decide how to report).
std::vector<std::string> authorized_nodes(const NFSpec& nf, const SubstrateGraph& graph);

// Total NF count over all slices and SFCs.
std::size_t gamma(const std::vector<SliceRequest>& requests);

enum class PairMode { Direct, LogicalMesh };

std::string to_string(PairMode m);
PairMode pair_mode_from_string(const std::string& s);

struct PairInfo {
    double latency = 0.0;    // ms
    double bandwidth = 0.0;  // Mbps; +inf on self-pairs
};

using PairKey = std::pair<std::string, std::string>;

// Node pairs a virtual link may map onto, keyed by ordered pair (both
// orientations present for every physical link / host pair).
//   Direct:      physical links plus all self-pairs.
//   LogicalMesh: all host pairs with min-latency-path latency and the best
//                bottleneck bandwidth among min-latency paths, plus host
//                self-pairs.
std::map<PairKey, PairInfo> eligible_pairs(const SubstrateGraph& graph, PairMode mode);

struct BuildConfig {
    PairMode mode = PairMode::Direct;
    bool pin_endpoints = false;      // ingress/egress become zero-demand pseudo-hops
    std::size_t max_variables = 2'000'000;
    // > 0 replaces the instance-scaled big-M; any value at least as large is
    // sound, so tests can widen it and confirm the optimum is unaffected.
    double big_m_override = 0.0;
};

// One position of an SFC's effective chain. Pseudo elements stand for a
// pinned ingress/egress node: zero demand, a single candidate node, and no
// contribution to the active-node objective.
struct ChainElement {
    std::string id;
    int nf_index = -1;         // into SFCSpec::nfs, -1 for pseudo
    std::string pinned_node;   // pseudo only
    bool pseudo = false;
};

std::vector<ChainElement> effective_chain(const SFCSpec& sfc, bool pin_endpoints);

// New graph with capacities reduced by the solution's consumption. Link
// bandwidth is charged per physical link: the routed link itself in Direct
// mode, the links of the canonical min-latency path in LogicalMesh mode.
// Self-pairs consume no link bandwidth. Throws Error("NegativeResidual")
// if any reduction would go below zero.
SubstrateGraph residual_apply(const SubstrateGraph& graph,
                              const std::vector<SliceRequest>& requests,
                              const PlacementSolution& solution,
                              PairMode mode = PairMode::Direct);

inline PairKey canonical_pair(const std::string& u, const std::string& v) {
    return u <= v ? PairKey{u, v} : PairKey{v, u};
}

inline double unbounded_bandwidth() { return std::numeric_limits<double>::infinity(); }

}  // namespace chainplace
