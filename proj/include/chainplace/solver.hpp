#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "chainplace/milp.hpp"
#include "chainplace/model.hpp"

namespace chainplace {

// Exact minimization of the active-node count by branch-and-bound over the
// NF-assignment variables. ρ, Z and the φ continuations are all implied once
// every NF has a node, so the search branches on assignments only and derives
// the rest; an LP export (milp.hpp) remains available for external solvers.

// Each rule can be switched off on its own; the search stays correct because
// complete assignments are feasibility-checked at the leaves regardless.
struct PruneRules {
    bool capacity = true;      // skip nodes lacking residual capacity
    bool latency = true;       // per-SFC consumed latency beyond the budget
    bool bandwidth = true;     // hop would overdraw a node pair's bandwidth
    bool active_bound = true;  // active-count lower bound vs the incumbent
};

struct SolverLimits {
    double time_budget = 60.0;                // wall-clock seconds, > 0
    std::uint64_t node_budget = 100'000'000;  // search-tree nodes, > 0
    // Only solutions with objective < cutoff are accepted; with no solution
    // under the cutoff the result is INFEASIBLE.
    std::optional<int> objective_cutoff;
    int workers = 1;
    PruneRules prunes;
};

// One open node of the search: a prefix of the flattened element sequence is
// placed, everything else is free. Kept consistent incrementally (exact
// undo), re-checked in full at the leaves.
struct SearchState {
    std::vector<std::string> assignment;  // per flattened element, "" = unassigned
    std::map<std::string, ResourceVector> residual_capacity;
    // Unordered-pair residual bandwidth; pairs never touched are absent and
    // implicitly at full capacity. Self-pairs are free and never tracked.
    std::map<PairKey, double> residual_bandwidth;
    std::vector<double> consumed_latency;  // per flattened SFC
    std::set<std::string> active;
    PlacementSolution incumbent;  // best complete solution found so far
};

// Branch-and-bound over NF assignments in deterministic chain order.
// Returns OPTIMAL (provably minimum active-node count, ties broken by the
// lexicographically smallest assignment vector), INFEASIBLE (diagnostics
// name the root cause when detectable: empty authorized set, per-NF
// capacity, unreachable latency budget), or TIMEOUT carrying the best
// incumbent when a budget runs out. `limits.workers` > 1 evaluates sibling
// subtrees in parallel; results are independent of the worker count.
// Pre: inputs validate (see validate()); throws Error("InvalidLimits") on
// non-positive budgets or worker counts.
PlacementSolution solve_exact(const SubstrateGraph& graph,
                              const std::vector<SliceRequest>& requests,
                              const BuildConfig& config = {}, const SolverLimits& limits = {});

// Independent oracle: plain enumeration of every assignment vector, each
// candidate checked by the verifier module. No pruning, single-threaded,
// and deliberately sharing no search code with solve_exact. Hard-capped at
// 6 NFs and 6 substrate nodes; throws Error("InstanceTooLarge") beyond.
PlacementSolution brute_force_optimum(const SubstrateGraph& graph,
                                      const std::vector<SliceRequest>& requests,
                                      const BuildConfig& config = {},
                                      const SolverLimits& limits = {});

// Reads an external solver's dump: one `«variable name» «value»` line per
// nonzero variable, plus an optional `# objective «value»` header that is
// cross-checked against the ρ count. Throws Error codes UnknownVariableName,
// NonIntegralBinary, ObjectiveMismatch, ParseError.
PlacementSolution parse_solution_file(const std::string& text, const VariableIndex& index);

}  // namespace chainplace
