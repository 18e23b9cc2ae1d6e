#include "chainplace/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <climits>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string_view>
#include <thread>

#include <fmt/format.h>

#include "chainplace/verifier.hpp"

namespace chainplace {

namespace {

// Same absolute tolerance as the verifier, so both sides call the same
// borderline assignments feasible.
constexpr double kTol = 1e-6;
constexpr int kUncoverable = INT_MAX / 2;

struct FlatSfc {
    const SliceRequest* slice = nullptr;
    const SFCSpec* sfc = nullptr;
    std::vector<ChainElement> chain;
    std::size_t first_elem = 0;  // index of chain[0] in Problem::elems
};

struct FlatElem {
    std::size_t sfc_idx = 0;
    std::size_t pos = 0;  // position in the effective chain
    bool pseudo = false;
    const ResourceVector* demand = nullptr;  // null for pseudo endpoints
    std::vector<std::string> candidates;     // sorted; branching order
};

// Immutable view of one solve: flattened chains in deterministic order
// (slices, then SFCs, then chain positions, exactly as submitted).
struct Problem {
    const SubstrateGraph* graph = nullptr;
    BuildConfig config;
    std::map<PairKey, PairInfo> pairs;
    std::vector<FlatSfc> sfcs;
    std::vector<FlatElem> elems;
    // suffix[i][r] = summed demand of real elements i..end, for the
    // completion lower bound; suffix_min[i][r] = smallest such demand
    // (infinite past the end), for writing off residuals too small to host
    // anything that is still unplaced.
    std::vector<std::vector<double>> suffix;
    std::vector<std::vector<double>> suffix_min;
    std::vector<std::string> hosts;  // sorted host ids
};

Problem flatten(const SubstrateGraph& graph, const std::vector<SliceRequest>& requests,
                const BuildConfig& config) {
    Problem pb;
    pb.graph = &graph;
    pb.config = config;
    pb.pairs = eligible_pairs(graph, config.mode);
    pb.hosts = graph.host_ids_sorted();
    for (const auto& slice : requests)
        for (const auto& sfc : slice.sfcs) {
            FlatSfc fs;
            fs.slice = &slice;
            fs.sfc = &sfc;
            fs.chain = effective_chain(sfc, config.pin_endpoints);
            fs.first_elem = pb.elems.size();
            for (std::size_t pos = 0; pos < fs.chain.size(); ++pos) {
                const auto& elem = fs.chain[pos];
                FlatElem fe;
                fe.sfc_idx = pb.sfcs.size();
                fe.pos = pos;
                fe.pseudo = elem.pseudo;
                if (elem.pseudo) {
                    fe.candidates = {elem.pinned_node};
                } else {
                    fe.demand = &sfc.nfs[elem.nf_index].demand;
                    fe.candidates = authorized_nodes(sfc.nfs[elem.nf_index], graph);
                }
                pb.elems.push_back(std::move(fe));
            }
            pb.sfcs.push_back(std::move(fs));
        }

    const std::size_t kinds = graph.resource_kinds.size();
    pb.suffix.assign(pb.elems.size() + 1, std::vector<double>(kinds, 0.0));
    pb.suffix_min.assign(pb.elems.size() + 1,
                         std::vector<double>(kinds, std::numeric_limits<double>::infinity()));
    for (std::size_t i = pb.elems.size(); i-- > 0;) {
        pb.suffix[i] = pb.suffix[i + 1];
        pb.suffix_min[i] = pb.suffix_min[i + 1];
        if (!pb.elems[i].pseudo)
            for (std::size_t r = 0; r < kinds; ++r) {
                pb.suffix[i][r] += (*pb.elems[i].demand)[r];
                pb.suffix_min[i][r] = std::min(pb.suffix_min[i][r], (*pb.elems[i].demand)[r]);
            }
    }
    return pb;
}

std::string elem_tag(const Problem& pb, const FlatElem& e) {
    const auto& fs = pb.sfcs[e.sfc_idx];
    return fmt::format("{}/{}/{}", fs.slice->slice_id, fs.sfc->id, fs.chain[e.pos].id);
}

// Root-level infeasibilities with a nameable cause. Each check is a true
// necessary condition, so declaring INFEASIBLE here is always sound.
std::optional<PlacementSolution> upfront_infeasible(const Problem& pb) {
    const auto infeasible = [](std::string why) {
        PlacementSolution s;
        s.status = SolveStatus::Infeasible;
        s.diagnostics = std::move(why);
        return s;
    };

    for (const auto& e : pb.elems)
        if (e.candidates.empty())
            return infeasible(fmt::format("EmptyAuthorizedSet: {}", elem_tag(pb, e)));

    const std::size_t kinds = pb.graph->resource_kinds.size();
    for (const auto& e : pb.elems) {
        if (e.pseudo) continue;
        bool fits_somewhere = false;
        for (const auto& n : e.candidates) {
            const auto* node = pb.graph->find_node(n);
            bool fits = true;
            for (std::size_t r = 0; r < kinds && fits; ++r)
                fits = (*e.demand)[r] <= node->capacity[r] + kTol;
            if (fits) {
                fits_somewhere = true;
                break;
            }
        }
        if (!fits_somewhere)
            return infeasible(
                fmt::format("capacity: NF {} fits no authorized node", elem_tag(pb, e)));
    }

    for (const auto& fs : pb.sfcs) {
        double floor_latency = 0.0;
        for (std::size_t pos = 1; pos < fs.chain.size(); ++pos) {
            const auto& prev = pb.elems[fs.first_elem + pos - 1].candidates;
            const auto& cur = pb.elems[fs.first_elem + pos].candidates;
            double best = std::numeric_limits<double>::infinity();
            for (const auto& u : prev)
                for (const auto& v : cur) {
                    const auto it = pb.pairs.find({u, v});
                    if (it != pb.pairs.end()) best = std::min(best, it->second.latency);
                }
            if (std::isinf(best))
                return infeasible(fmt::format("latency: SFC {}/{} hop {} has no eligible node pair",
                                              fs.slice->slice_id, fs.sfc->id, pos));
            floor_latency += best;
        }
        if (floor_latency > fs.sfc->latency_budget + kTol)
            return infeasible(
                fmt::format("latency: SFC {}/{} needs at least {} ms against a budget of {}",
                            fs.slice->slice_id, fs.sfc->id, floor_latency, fs.sfc->latency_budget));
    }
    return std::nullopt;
}

SearchState initial_state(const Problem& pb) {
    SearchState st;
    st.assignment.assign(pb.elems.size(), "");
    for (const auto& n : pb.graph->nodes) st.residual_capacity[n.id] = n.capacity;
    st.consumed_latency.assign(pb.sfcs.size(), 0.0);
    return st;
}

// Complete assignment vector -> solution, with hop budgets set to the actual
// effective latencies of the routed pairs.
PlacementSolution materialize(const Problem& pb, const std::vector<std::string>& assign) {
    PlacementSolution out;
    out.status = SolveStatus::Optimal;
    for (const auto& fs : pb.sfcs)
        for (std::size_t pos = 0; pos < fs.chain.size(); ++pos) {
            const auto& node = assign[fs.first_elem + pos];
            if (!fs.chain[pos].pseudo) {
                out.assignment[{fs.slice->slice_id, fs.sfc->id, fs.chain[pos].id}] = node;
                out.active_nodes.insert(node);
            }
            if (pos > 0) {
                const HopKey hop{fs.slice->slice_id, fs.sfc->id, static_cast<int>(pos)};
                const auto& prev = assign[fs.first_elem + pos - 1];
                out.routing[hop] = {prev, node};
                out.hop_latency_budget[hop] = pb.pairs.at({prev, node}).latency;
            }
        }
    out.objective = static_cast<int>(out.active_nodes.size());
    return out;
}

struct Undo {
    bool activated = false;
    bool touched_res = false;
    ResourceVector old_res;
    bool touched_bw = false;
    PairKey bw_key;
    double old_bw = 0.0;
    bool bw_existed = false;
    bool touched_lat = false;
    double old_lat = 0.0;
};

struct Engine {
    const Problem& pb;
    const SolverLimits& limits;
    std::atomic<int>& bound;              // shared incumbent objective (or cutoff)
    std::atomic<std::uint64_t>& visited;  // candidate applications, all workers
    std::atomic<int>& stop_reason;        // 0 running, 1 time, 2 nodes
    std::chrono::steady_clock::time_point deadline;
    // With one worker, a subtree whose bound merely ties the incumbent can be
    // pruned: the incumbent, found earlier in lexicographic DFS order, is
    // already the lex-smaller tie. With several workers that would make the
    // outcome depend on timing, so ties are explored and the final merge
    // applies the deterministic tie-break.
    bool prune_ties = true;

    struct Result {
        bool found = false;
        int objective = 0;
        std::vector<std::string> assign;
    };

    bool tick() {
        const auto n = visited.fetch_add(1, std::memory_order_relaxed) + 1;
        int expected = 0;
        if (n > limits.node_budget) stop_reason.compare_exchange_strong(expected, 2);
        else if ((n & 0x1ff) == 1 && std::chrono::steady_clock::now() > deadline)
            stop_reason.compare_exchange_strong(expected, 1);
        return stop_reason.load(std::memory_order_relaxed) == 0;
    }

    // Checks first, mutates only on acceptance; rejected candidates leave the
    // state untouched. Disabled rules skip their check and let the violation
    // ride to the leaf, where the full re-check rejects it.
    bool try_apply(std::size_t t, const std::string& node, SearchState& st, Undo& undo) {
        const FlatElem& e = pb.elems[t];
        const FlatSfc& fs = pb.sfcs[e.sfc_idx];
        const PairInfo* hop_pair = nullptr;
        if (e.pos > 0) {
            const auto it = pb.pairs.find({st.assignment[t - 1], node});
            if (it == pb.pairs.end()) return false;  // no such pair exists at all
            hop_pair = &it->second;
            if (limits.prunes.latency &&
                st.consumed_latency[e.sfc_idx] + hop_pair->latency > fs.sfc->latency_budget + kTol)
                return false;
        }
        if (!e.pseudo && limits.prunes.capacity) {
            const auto& resid = st.residual_capacity.at(node);
            for (std::size_t r = 0; r < resid.size(); ++r)
                if (resid[r] < (*e.demand)[r] - kTol) return false;
        }
        if (hop_pair && st.assignment[t - 1] != node) {
            const PairKey key = canonical_pair(st.assignment[t - 1], node);
            const auto it = st.residual_bandwidth.find(key);
            const double resid = it != st.residual_bandwidth.end() ? it->second
                                                                   : pb.pairs.at(key).bandwidth;
            if (limits.prunes.bandwidth && resid < fs.sfc->hop_bandwidth - kTol) return false;
            undo.touched_bw = true;
            undo.bw_key = key;
            undo.bw_existed = it != st.residual_bandwidth.end();
            undo.old_bw = undo.bw_existed ? it->second : 0.0;
            st.residual_bandwidth[key] = resid - fs.sfc->hop_bandwidth;
        }
        if (hop_pair) {
            undo.touched_lat = true;
            undo.old_lat = st.consumed_latency[e.sfc_idx];
            st.consumed_latency[e.sfc_idx] += hop_pair->latency;
        }
        if (!e.pseudo) {
            auto& resid = st.residual_capacity.at(node);
            undo.touched_res = true;
            undo.old_res = resid;
            for (std::size_t r = 0; r < resid.size(); ++r) resid[r] -= (*e.demand)[r];
            undo.activated = st.active.insert(node).second;
        }
        st.assignment[t] = node;
        return true;
    }

    void revert(std::size_t t, const std::string& node, SearchState& st, const Undo& undo) {
        const FlatElem& e = pb.elems[t];
        st.assignment[t].clear();
        if (undo.activated) st.active.erase(node);
        if (undo.touched_res) st.residual_capacity.at(node) = undo.old_res;
        if (undo.touched_lat) st.consumed_latency[e.sfc_idx] = undo.old_lat;
        if (undo.touched_bw) {
            if (undo.bw_existed) st.residual_bandwidth.at(undo.bw_key) = undo.old_bw;
            else st.residual_bandwidth.erase(undo.bw_key);
        }
    }

    // A node is dead for the rest of the search path when some resource
    // residual undercuts every remaining demand: nothing unplaced can land
    // there, so its leftovers must not count toward the cover.
    bool dead(const std::string& node, const std::vector<double>& floor,
              const SearchState& st) const {
        const auto& resid = st.residual_capacity.at(node);
        for (std::size_t r = 0; r < resid.size(); ++r)
            if (resid[r] + kTol < floor[r]) return true;
        return false;
    }

    // Admissible completion bound: the fewest additional activations any
    // kind's remaining demand allows, granting every future NF the residual
    // of all usable active nodes plus the largest inactive residuals.
    int completion_bound(std::size_t next, const SearchState& st) const {
        const auto& remaining = pb.suffix[next];
        const auto& floor = pb.suffix_min[next];
        int worst = 0;
        std::vector<double> inactive;
        for (std::size_t r = 0; r < remaining.size(); ++r) {
            double need = remaining[r];
            if (need <= kTol) continue;
            for (const auto& a : st.active)
                if (!dead(a, floor, st)) need -= st.residual_capacity.at(a)[r];
            if (need <= kTol) continue;
            inactive.clear();
            for (const auto& h : pb.hosts)
                if (!st.active.count(h) && !dead(h, floor, st))
                    inactive.push_back(st.residual_capacity.at(h)[r]);
            std::sort(inactive.begin(), inactive.end(), std::greater<>());
            int taken = 0;
            for (const double cap : inactive) {
                if (need <= kTol) break;
                need -= cap;
                ++taken;
            }
            if (need > kTol) return kUncoverable;
            worst = std::max(worst, taken);
        }
        return worst;
    }

    // Endgame check, valid once no further activation fits under the bound:
    // every unplaced NF must have an authorized active node whose current
    // residual covers it (residuals only shrink along a completion).
    bool suffix_fits_active(std::size_t next, const SearchState& st) const {
        for (std::size_t i = next; i < pb.elems.size(); ++i) {
            const auto& e = pb.elems[i];
            if (e.pseudo) continue;
            bool fits = false;
            for (const auto& c : e.candidates) {
                if (!st.active.count(c)) continue;
                const auto& resid = st.residual_capacity.at(c);
                bool ok = true;
                for (std::size_t r = 0; r < resid.size(); ++r)
                    if (resid[r] < (*e.demand)[r] - kTol) {
                        ok = false;
                        break;
                    }
                if (ok) {
                    fits = true;
                    break;
                }
            }
            if (!fits) return false;
        }
        return true;
    }

    bool leaf_feasible(const SearchState& st) const {
        for (const auto& a : st.active)
            for (const double r : st.residual_capacity.at(a))
                if (r < -kTol) return false;
        for (std::size_t s = 0; s < pb.sfcs.size(); ++s)
            if (st.consumed_latency[s] > pb.sfcs[s].sfc->latency_budget + kTol) return false;
        for (const auto& [pair, resid] : st.residual_bandwidth)
            if (resid < -kTol) return false;
        return true;
    }

    void leaf(const SearchState& st, Result& out) {
        if (!leaf_feasible(st)) return;
        const int objective = static_cast<int>(st.active.size());
        if (objective >= limits.objective_cutoff.value_or(INT_MAX)) return;
        if (out.found && objective >= out.objective) return;  // lex-first tie already held
        out.found = true;
        out.objective = objective;
        out.assign = st.assignment;
        int seen = bound.load(std::memory_order_relaxed);
        while (objective < seen &&
               !bound.compare_exchange_weak(seen, objective, std::memory_order_relaxed)) {
        }
    }

    // Returns false only when a budget fired and the search must unwind.
    bool dfs(std::size_t t, SearchState& st, Result& out) {
        if (t == pb.elems.size()) {
            leaf(st, out);
            return true;
        }
        for (const auto& node : pb.elems[t].candidates) {
            if (!tick()) return false;
            Undo undo;
            if (!try_apply(t, node, st, undo)) continue;
            bool keep = true;
            if (limits.prunes.active_bound) {
                const int cb = completion_bound(t + 1, st);
                if (cb >= kUncoverable) {
                    keep = false;  // no completion exists at all, incumbent or not
                } else {
                    const int active = static_cast<int>(st.active.size());
                    const int lb = active + cb;
                    const int b = bound.load(std::memory_order_relaxed);
                    keep = prune_ties ? lb < b : lb <= b;
                    if (keep && b != INT_MAX && (prune_ties ? b - 1 : b) - active == 0)
                        keep = suffix_fits_active(t + 1, st);
                }
            }
            const bool ok = !keep || dfs(t + 1, st, out);
            revert(t, node, st, undo);
            if (!ok) return false;
        }
        return true;
    }
};

}  // namespace

PlacementSolution solve_exact(const SubstrateGraph& graph,
                              const std::vector<SliceRequest>& requests,
                              const BuildConfig& config, const SolverLimits& limits) {
    if (limits.time_budget <= 0 || limits.node_budget == 0 || limits.workers < 1)
        throw Error("InvalidLimits", "time budget, node budget and workers must be positive");

    const Problem pb = flatten(graph, requests, config);
    if (auto infeasible = upfront_infeasible(pb)) return *infeasible;

    if (pb.elems.empty()) {
        PlacementSolution empty;
        empty.status = SolveStatus::Optimal;
        return empty;
    }

    std::atomic<int> bound{limits.objective_cutoff.value_or(INT_MAX)};
    std::atomic<std::uint64_t> visited{0};
    std::atomic<int> stop_reason{0};
    const auto deadline =
        std::chrono::steady_clock::now() +
        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
            std::chrono::duration<double>(limits.time_budget));

    // One task per first-element candidate; workers pull tasks and each task
    // records its own subtree result, so the merge below is identical no
    // matter which worker ran what.
    const auto& roots = pb.elems[0].candidates;
    std::vector<Engine::Result> results(roots.size());
    const int workers = std::min<int>(limits.workers, static_cast<int>(roots.size()));
    std::atomic<std::size_t> next_task{0};

    const auto work = [&] {
        Engine engine{pb,      limits,   bound, visited, stop_reason,
                      deadline, workers == 1};
        for (;;) {
            const std::size_t i = next_task.fetch_add(1, std::memory_order_relaxed);
            if (i >= roots.size()) break;
            SearchState st = initial_state(pb);
            if (!engine.tick()) break;
            Undo undo;
            if (!engine.try_apply(0, roots[i], st, undo)) continue;
            bool keep = true;
            if (limits.prunes.active_bound) {
                const int lb =
                    static_cast<int>(st.active.size()) + engine.completion_bound(1, st);
                const int b = bound.load(std::memory_order_relaxed);
                keep = engine.prune_ties ? lb < b : lb <= b;
            }
            if (keep && !engine.dfs(1, st, results[i])) break;
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    // Deterministic merge: best objective, then lexicographically smallest
    // assignment vector.
    const Engine::Result* best = nullptr;
    for (const auto& r : results) {
        if (!r.found) continue;
        if (!best || r.objective < best->objective ||
            (r.objective == best->objective && r.assign < best->assign))
            best = &r;
    }

    if (const int reason = stop_reason.load()) {
        PlacementSolution out;
        if (best) out = materialize(pb, best->assign);
        out.status = SolveStatus::Timeout;
        out.diagnostics = reason == 1 ? "time budget exhausted" : "node budget exhausted";
        return out;
    }
    if (!best) {
        PlacementSolution out;
        out.status = SolveStatus::Infeasible;
        out.diagnostics = limits.objective_cutoff
                              ? "search exhausted: no feasible assignment under the objective cutoff"
                              : "search exhausted: no feasible assignment";
        return out;
    }
    return materialize(pb, best->assign);
}

PlacementSolution brute_force_optimum(const SubstrateGraph& graph,
                                      const std::vector<SliceRequest>& requests,
                                      const BuildConfig& config, const SolverLimits&) {
    if (gamma(requests) > 6 || graph.nodes.size() > 6)
        throw Error("InstanceTooLarge",
                    fmt::format("brute force is capped at 6 NFs and 6 nodes, got {} NFs on {} nodes",
                                gamma(requests), graph.nodes.size()));

    const auto pairs = eligible_pairs(graph, config.mode);

    // Flattened real NFs with their candidate sets, in chain order.
    struct Digit {
        const SliceRequest* slice;
        const SFCSpec* sfc;
        std::string nf_id;
        std::vector<std::string> candidates;
    };
    std::vector<Digit> digits;
    for (const auto& slice : requests)
        for (const auto& sfc : slice.sfcs)
            for (const auto& nf : sfc.nfs)
                digits.push_back({&slice, &sfc, nf.id, authorized_nodes(nf, graph)});
    for (const auto& d : digits)
        if (d.candidates.empty()) {
            PlacementSolution out;
            out.status = SolveStatus::Infeasible;
            out.diagnostics = fmt::format("EmptyAuthorizedSet: {}/{}/{}", d.slice->slice_id,
                                          d.sfc->id, d.nf_id);
            return out;
        }

    std::optional<PlacementSolution> best;
    std::vector<std::size_t> pick(digits.size(), 0);
    for (;;) {
        // Assemble the candidate solution for the current assignment vector.
        PlacementSolution cand;
        cand.status = SolveStatus::Optimal;
        std::size_t flat = 0;
        for (const auto& slice : requests)
            for (const auto& sfc : slice.sfcs) {
                const auto chain = effective_chain(sfc, config.pin_endpoints);
                std::vector<std::string> nodes(chain.size());
                for (std::size_t pos = 0; pos < chain.size(); ++pos) {
                    if (chain[pos].pseudo) {
                        nodes[pos] = chain[pos].pinned_node;
                        continue;
                    }
                    nodes[pos] = digits[flat].candidates[pick[flat]];
                    cand.assignment[{slice.slice_id, sfc.id, chain[pos].id}] = nodes[pos];
                    cand.active_nodes.insert(nodes[pos]);
                    ++flat;
                }
                for (std::size_t pos = 1; pos < chain.size(); ++pos) {
                    const HopKey hop{slice.slice_id, sfc.id, static_cast<int>(pos)};
                    cand.routing[hop] = {nodes[pos - 1], nodes[pos]};
                    const auto it = pairs.find({nodes[pos - 1], nodes[pos]});
                    cand.hop_latency_budget[hop] = it != pairs.end() ? it->second.latency : 0.0;
                }
            }
        cand.objective = static_cast<int>(cand.active_nodes.size());

        if (verify(graph, requests, cand, config).overall &&
            (!best || cand.objective < best->objective))
            best = std::move(cand);

        // Odometer step, rightmost digit fastest: enumeration is in
        // lexicographic order, so the first optimum kept is the lex-smallest.
        std::size_t d = digits.size();
        while (d > 0 && ++pick[d - 1] == digits[d - 1].candidates.size()) pick[--d] = 0;
        if (d == 0) break;
    }

    if (!best) {
        PlacementSolution out;
        out.status = SolveStatus::Infeasible;
        out.diagnostics = "exhaustive enumeration found no feasible assignment";
        return out;
    }
    return *best;
}

PlacementSolution parse_solution_file(const std::string& text, const VariableIndex& index) {
    enum class Kind { Rho, Y, Z, PhiL, Other };
    struct Target {
        Kind kind = Kind::Other;
        std::size_t ref = 0;  // index into the per-kind key vectors below
    };
    std::map<std::string, Target> names;
    std::vector<std::string> rho_nodes;
    struct YRef {
        NfKey key;
        std::string node;
        bool pseudo;
    };
    std::vector<YRef> y_refs;
    struct ZRef {
        HopKey key;
        std::pair<std::string, std::string> pair;
    };
    std::vector<ZRef> z_refs;
    std::vector<HopKey> phi_refs;

    for (const auto& [node, id] : index.rho) {
        names[fmt::format("rho[{}]", node)] = {Kind::Rho, rho_nodes.size()};
        rho_nodes.push_back(node);
    }
    for (const auto& [key, id] : index.y) {
        const auto& [slice, sfc, pos, node] = key;
        const auto& elem = index.chains.at({slice, sfc}).at(pos);
        names[fmt::format("Y[{},{},{},{}]", slice, sfc, elem.id, node)] = {Kind::Y, y_refs.size()};
        y_refs.push_back({{slice, sfc, elem.id}, node, elem.pseudo});
    }
    for (const auto& [key, id] : index.z) {
        const auto& [slice, sfc, hop, u, v] = key;
        names[fmt::format("Z[{},{},{},{},{}]", slice, sfc, hop, u, v)] = {Kind::Z, z_refs.size()};
        z_refs.push_back({{slice, sfc, hop}, {u, v}});
    }
    for (const auto& [key, id] : index.phi_l) {
        const auto& [slice, sfc, hop] = key;
        names[fmt::format("phiL[{},{},{}]", slice, sfc, hop)] = {Kind::PhiL, phi_refs.size()};
        phi_refs.push_back({slice, sfc, hop});
    }
    for (const auto& [key, id] : index.phi_l_uv) {
        const auto& [slice, sfc, hop, u, v] = key;
        names[fmt::format("phiLuv[{},{},{},{},{}]", slice, sfc, hop, u, v)] = {Kind::Other, 0};
    }
    for (const auto& [key, id] : index.phi_b_uv) {
        const auto& [slice, sfc, hop, u, v] = key;
        names[fmt::format("phiBuv[{},{},{},{},{}]", slice, sfc, hop, u, v)] = {Kind::Other, 0};
    }

    PlacementSolution out;
    out.status = SolveStatus::Optimal;
    std::optional<double> declared_objective;

    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(start, end - start);
        start = end + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            if (start > text.size()) break;
            continue;
        }
        if (line[0] == '#') {
            constexpr std::string_view prefix = "# objective ";
            if (line.rfind(prefix, 0) == 0) {
                char* parse_end = nullptr;
                declared_objective = std::strtod(line.c_str() + prefix.size(), &parse_end);
                if (parse_end == line.c_str() + prefix.size())
                    throw Error("ParseError", "bad objective header: " + line);
            }
            continue;
        }
        const std::size_t space = line.find(' ');
        if (space == std::string::npos || space == 0)
            throw Error("ParseError", "expected «name» «value»: " + line);
        const std::string name = line.substr(0, space);
        char* parse_end = nullptr;
        const double value = std::strtod(line.c_str() + space + 1, &parse_end);
        if (parse_end == line.c_str() + space + 1)
            throw Error("ParseError", "bad value in line: " + line);

        const auto it = names.find(name);
        if (it == names.end()) throw Error("UnknownVariableName", name);
        const auto [kind, ref] = it->second;
        const bool binary = kind == Kind::Rho || kind == Kind::Y || kind == Kind::Z;
        if (binary && std::abs(value - std::round(value)) >= 1e-6)
            throw Error("NonIntegralBinary", fmt::format("{} = {}", name, value));
        const bool set = std::abs(value - 1.0) < 1e-6;
        switch (kind) {
            case Kind::Rho:
                if (set) out.active_nodes.insert(rho_nodes[ref]);
                break;
            case Kind::Y:
                if (set && !y_refs[ref].pseudo) out.assignment[y_refs[ref].key] = y_refs[ref].node;
                break;
            case Kind::Z:
                if (set) out.routing[z_refs[ref].key] = z_refs[ref].pair;
                break;
            case Kind::PhiL:
                out.hop_latency_budget[phi_refs[ref]] = value;
                break;
            case Kind::Other:
                break;
        }
    }

    out.objective = static_cast<int>(out.active_nodes.size());
    if (declared_objective && std::abs(*declared_objective - out.objective) >= 1e-6)
        throw Error("ObjectiveMismatch",
                    fmt::format("header says {}, decoded rho count is {}", *declared_objective,
                                out.objective));
    return out;
}

}  // namespace chainplace
