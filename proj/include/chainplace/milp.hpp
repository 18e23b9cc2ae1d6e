#pragma once

// Mixed-integer linear model construction: node-activation binaries, NF
// placement binaries, virtual-link routing binaries and per-hop latency /
// bandwidth continuations, with big-M linearization of the conditional
// latency and bandwidth checks.

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "chainplace/model.hpp"

namespace chainplace {

enum class VarKind { Binary, Continuous };

struct MilpVariable {
    int id = 0;
    std::string name;
    VarKind kind = VarKind::Binary;
    double lower = 0.0;
    double upper = 1.0;
};

enum class Relation { Le, Ge, Eq };

enum class Family {
    Placement,
    NodeActive,
    Resource,
    LinkOneHot,
    LinkCoupling,
    LatencyBudget,
    LatencyLinearization,
    LatencyLink,
    BwDemand,
    BwLinearization,
    BwCapacity,
};

std::string to_string(Family f);

struct LinearConstraint {
    std::vector<std::pair<double, int>> terms;  // (coefficient, variable id)
    Relation relation = Relation::Le;
    double rhs = 0.0;
    Family family = Family::Placement;
};

struct MilpModel {
    std::vector<MilpVariable> variables;
    std::vector<LinearConstraint> constraints;
    std::vector<std::pair<double, int>> objective;  // MINIMIZE
    double big_m = 0.0;
};

// Bidirectional variable lookup, with enough chain metadata to decode a raw
// value vector back into a PlacementSolution. Chain positions are 0-based
// over the effective chain; hop h joins positions h-1 and h (h ≥ 1), which
// matches HopKey::hop.
struct VariableIndex {
    using Elem = std::tuple<std::string, std::string, int>;                       // slice,sfc,pos
    using ElemNode = std::tuple<std::string, std::string, int, std::string>;      // + node
    using Hop = std::tuple<std::string, std::string, int>;                        // slice,sfc,hop
    using HopPair = std::tuple<std::string, std::string, int, std::string, std::string>;

    std::map<std::string, int> rho;
    std::map<ElemNode, int> y;
    std::map<HopPair, int> z;
    std::map<Hop, int> phi_l;
    std::map<HopPair, int> phi_l_uv;
    std::map<HopPair, int> phi_b_uv;
    std::map<std::pair<std::string, std::string>, std::vector<ChainElement>> chains;
};

struct BuiltModel {
    MilpModel model;
    VariableIndex index;
};

// Instance-scaled big-M: max over SFC latency budgets, eligible-pair
// latencies, the total of all per-hop bandwidth demands, and eligible-pair
// capacities (self-pairs excluded), times two.
double big_m(const SubstrateGraph& graph, const std::vector<SliceRequest>& requests,
             PairMode mode = PairMode::Direct);

// Throws Error("EmptyAuthorizedSet") and Error("ModelTooLarge").
BuiltModel build_model(const SubstrateGraph& graph, const std::vector<SliceRequest>& requests,
                       const BuildConfig& config);

// Industry-standard LP text (Minimize / Subject To / Bounds / Binary / End),
// byte-stable for a given model.
std::string export_lp(const MilpModel& model);

struct EvalViolation {
    std::string what;    // constraint name or bound description
    double violation = 0.0;
};

struct EvalReport {
    bool feasible = true;
    std::vector<EvalViolation> violations;
    double objective_value = 0.0;
};

// Generic arithmetic check of a value vector against the model: variable
// bounds, binary integrality, and every linear constraint, within tol.
EvalReport evaluate(const MilpModel& model, const std::vector<double>& values, double tol = 1e-6);

// Raw value vector -> placement solution (status is set to Optimal; callers
// adjust). Active nodes are read off the ρ values.
PlacementSolution decode(const MilpModel& model, const VariableIndex& index,
                         const std::vector<double>& values);

// Canonical value vector of a semantically feasible solution: ρ/Y/Z as
// indicators, φ^L from the solution's hop budgets, φ^{L,u,v} = φ^L·Z,
// φ^{B,u,v} = w·Z.
std::vector<double> encode(const MilpModel& model, const VariableIndex& index,
                           const std::vector<SliceRequest>& requests,
                           const PlacementSolution& solution);

}  // namespace chainplace
