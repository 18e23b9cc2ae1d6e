#pragma once

#include <string>

#include "chainplace/model.hpp"

namespace chainplace {

// Independent feasibility check of a PlacementSolution. Works on domain
// quantities (demands, capacities, effective latency/bandwidth), not on the
// linearized big-M rows, so it can catch builder bugs as well as solver bugs.

struct FamilyVerdict {
    bool pass = true;
    // Human-readable locator of the first violation ("s1/video/nf_b: ..."),
    // empty when the family passes.
    std::string first_violation;
};

struct VerificationReport {
    FamilyVerdict placement;  // each NF on exactly one authorized node; hosts flagged active
    FamilyVerdict resource;   // per-node per-kind demand sums within capacity
    FamilyVerdict link;       // each hop routed on exactly one eligible pair matching its endpoints
    FamilyVerdict latency;    // per-SFC routed latency within budget; per-hop budget covers the pair
    FamilyVerdict bandwidth;  // per non-self pair, summed hop bandwidth within effective bandwidth
    bool overall = true;
};

// Absolute tolerance for latency/bandwidth/resource comparisons.
inline constexpr double kVerifyTol = 1e-6;

VerificationReport verify(const SubstrateGraph& graph,
                          const std::vector<SliceRequest>& requests,
                          const PlacementSolution& solution,
                          const BuildConfig& config = {});

// One line per family plus an OVERALL line, e.g. "PLACEMENT PASS".
std::string to_text(const VerificationReport& report);

}  // namespace chainplace
