#include "chainplace/verifier.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <fmt/format.h>

namespace chainplace {

namespace {

void fail(FamilyVerdict& verdict, std::string where) {
    if (!verdict.pass) return;  // keep the first violation
    verdict.pass = false;
    verdict.first_violation = std::move(where);
}

}  // namespace

VerificationReport verify(const SubstrateGraph& graph,
                          const std::vector<SliceRequest>& requests,
                          const PlacementSolution& solution,
                          const BuildConfig& config) {
    VerificationReport report;
    const auto pairs = eligible_pairs(graph, config.mode);
    const auto& active = solution.active_nodes;

    // node -> per-kind demand sums, accumulated across every slice.
    std::map<std::string, ResourceVector> load;
    // unordered non-self pair -> summed hop bandwidth.
    std::map<PairKey, double> pair_load;
    // Assignment keys consumed while walking the chains; leftovers are stray.
    std::set<NfKey> seen_nf;
    std::set<HopKey> seen_hop;

    for (const auto& slice : requests) {
        for (const auto& sfc : slice.sfcs) {
            const auto chain = effective_chain(sfc, config.pin_endpoints);

            // Where each chain element actually sits (pinned node for pseudo
            // endpoints, assigned node for real NFs).
            std::vector<std::string> placed(chain.size());
            for (std::size_t pos = 0; pos < chain.size(); ++pos) {
                const auto& elem = chain[pos];
                if (elem.pseudo) {
                    placed[pos] = elem.pinned_node;
                    continue;
                }
                const NfKey key{slice.slice_id, sfc.id, elem.id};
                const auto it = solution.assignment.find(key);
                const auto tag = fmt::format("{}/{}/{}", slice.slice_id, sfc.id, elem.id);
                if (it == solution.assignment.end()) {
                    fail(report.placement, tag + ": no node assigned");
                    continue;
                }
                seen_nf.insert(key);
                placed[pos] = it->second;
                const auto& nf = sfc.nfs[elem.nf_index];
                const auto allowed = authorized_nodes(nf, graph);
                if (std::find(allowed.begin(), allowed.end(), it->second) == allowed.end()) {
                    fail(report.placement,
                         fmt::format("{}: node {} not authorized", tag, it->second));
                    continue;
                }
                if (!active.count(it->second))
                    fail(report.placement,
                         fmt::format("{}: node {} hosts it but is not active", tag, it->second));
                auto& sums = load[it->second];
                sums.resize(graph.resource_kinds.size(), 0.0);
                for (std::size_t r = 0; r < graph.resource_kinds.size(); ++r)
                    sums[r] += nf.demand[r];
            }

            // Hops: exactly one routed pair, eligible, endpoints matching the
            // placed chain elements.
            double routed_latency = 0.0;
            bool chain_routed = true;
            for (std::size_t h = 1; h < chain.size(); ++h) {
                const HopKey key{slice.slice_id, sfc.id, static_cast<int>(h)};
                const auto tag = fmt::format("{}/{}/hop{}", slice.slice_id, sfc.id, h);
                const auto it = solution.routing.find(key);
                if (it == solution.routing.end()) {
                    fail(report.link, tag + ": no pair routed");
                    chain_routed = false;
                    continue;
                }
                seen_hop.insert(key);
                const auto& [u, v] = it->second;
                const auto pit = pairs.find(PairKey{u, v});
                if (pit == pairs.end()) {
                    fail(report.link, fmt::format("{}: ({},{}) is not an eligible pair", tag, u, v));
                    chain_routed = false;
                    continue;
                }
                if (placed[h - 1].empty() || placed[h].empty()) {
                    chain_routed = false;  // placement already failed upstream
                } else if (u != placed[h - 1] || v != placed[h]) {
                    fail(report.link,
                         fmt::format("{}: routed ({},{}) but endpoints sit on ({},{})", tag, u, v,
                                     placed[h - 1], placed[h]));
                    chain_routed = false;
                }
                routed_latency += pit->second.latency;
                const auto bit = solution.hop_latency_budget.find(key);
                if (bit != solution.hop_latency_budget.end() &&
                    pit->second.latency > bit->second + kVerifyTol)
                    fail(report.latency,
                         fmt::format("{}: pair latency {} exceeds hop budget {}", tag,
                                     pit->second.latency, bit->second));
                if (u != v) pair_load[canonical_pair(u, v)] += sfc.hop_bandwidth;
            }
            if (chain_routed && routed_latency > sfc.latency_budget + kVerifyTol)
                fail(report.latency,
                     fmt::format("{}/{}: routed latency {} exceeds budget {}", slice.slice_id,
                                 sfc.id, routed_latency, sfc.latency_budget));
        }
    }

    for (const auto& [key, node] : solution.assignment)
        if (!seen_nf.count(key))
            fail(report.placement, fmt::format("{}/{}/{}: assignment for unknown NF (on {})",
                                               key.slice, key.sfc, key.nf, node));
    for (const auto& [key, pair] : solution.routing)
        if (!seen_hop.count(key))
            fail(report.link, fmt::format("{}/{}/hop{}: routing for unknown hop (({},{}))",
                                          key.slice, key.sfc, key.hop, pair.first,
                                          pair.second));

    for (const auto& [node_id, sums] : load) {
        const auto* node = graph.find_node(node_id);
        for (std::size_t r = 0; r < sums.size(); ++r)
            if (sums[r] > node->capacity[r] + kVerifyTol) {
                fail(report.resource,
                     fmt::format("{}/{}: load {} exceeds capacity {}", node_id,
                                 graph.resource_kinds[r], sums[r], node->capacity[r]));
                break;
            }
    }

    for (const auto& [key, used] : pair_load) {
        const auto pit = pairs.find(key);
        if (pit == pairs.end()) continue;  // already reported as a LINK failure
        if (used > pit->second.bandwidth + kVerifyTol)
            fail(report.bandwidth,
                 fmt::format("({},{}): routed bandwidth {} exceeds {}", key.first, key.second, used,
                             pit->second.bandwidth));
    }

    report.overall = report.placement.pass && report.resource.pass && report.link.pass &&
                     report.latency.pass && report.bandwidth.pass;
    return report;
}

std::string to_text(const VerificationReport& report) {
    const auto line = [](const char* family, const FamilyVerdict& v) {
        if (v.pass) return fmt::format("{} PASS\n", family);
        return fmt::format("{} FAIL {}\n", family, v.first_violation);
    };
    std::string out;
    out += line("PLACEMENT", report.placement);
    out += line("RESOURCE", report.resource);
    out += line("LINK", report.link);
    out += line("LATENCY", report.latency);
    out += line("BANDWIDTH", report.bandwidth);
    out += fmt::format("OVERALL {}\n", report.overall ? "PASS" : "FAIL");
    return out;
}

}  // namespace chainplace
