#include "chainplace/milp.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace chainplace {

std::string to_string(Family f) {
    switch (f) {
        case Family::Placement: return "PLACEMENT";
        case Family::NodeActive: return "NODE_ACTIVE";
        case Family::Resource: return "RESOURCE";
        case Family::LinkOneHot: return "LINK_ONEHOT";
        case Family::LinkCoupling: return "LINK_COUPLING";
        case Family::LatencyBudget: return "LATENCY_BUDGET";
        case Family::LatencyLinearization: return "LATENCY_LINEARIZATION";
        case Family::LatencyLink: return "LATENCY_LINK";
        case Family::BwDemand: return "BW_DEMAND";
        case Family::BwLinearization: return "BW_LINEARIZATION";
        case Family::BwCapacity: return "BW_CAPACITY";
    }
    return "?";
}

double big_m(const SubstrateGraph& graph, const std::vector<SliceRequest>& requests,
             PairMode mode) {
    double best = 0.0, total_bw = 0.0;
    for (const auto& sl : requests)
        for (const auto& sfc : sl.sfcs) {
            best = std::max(best, sfc.latency_budget);
            // single-NF chains contribute no virtual link to the total, yet
            // endpoint pseudo-hops may still carry w — keep M ≥ every w
            best = std::max(best, sfc.hop_bandwidth);
            if (sfc.nfs.size() > 1)
                total_bw += sfc.hop_bandwidth * static_cast<double>(sfc.nfs.size() - 1);
        }
    best = std::max(best, total_bw);
    for (const auto& [key, info] : eligible_pairs(graph, mode)) {
        if (key.first == key.second) continue;
        best = std::max(best, info.latency);
        best = std::max(best, info.bandwidth);
    }
    return best * 2.0;
}

namespace {

struct Builder {
    const SubstrateGraph& graph;
    const std::vector<SliceRequest>& requests;
    const BuildConfig& config;

    std::map<PairKey, PairInfo> pairs;
    double m = 0.0;
    BuiltModel out;

    // candidate node lists per (slice, sfc), aligned with the effective chain
    std::map<std::pair<std::string, std::string>, std::vector<std::vector<std::string>>> cand;

    int add_var(std::string name, VarKind kind, double lower, double upper) {
        if (out.model.variables.size() >= config.max_variables)
            throw Error("ModelTooLarge",
                        fmt::format("variable count would exceed the ceiling of {}",
                                    config.max_variables));
        int id = static_cast<int>(out.model.variables.size());
        out.model.variables.push_back({id, std::move(name), kind, lower, upper});
        return id;
    }

    void add_row(std::vector<std::pair<double, int>> terms, Relation rel, double rhs, Family fam) {
        out.model.constraints.push_back({std::move(terms), rel, rhs, fam});
    }

    void run() {
        pairs = eligible_pairs(graph, config.mode);
        m = config.big_m_override > 0.0 ? config.big_m_override
                                        : big_m(graph, requests, config.mode);
        out.model.big_m = m;

        auto node_ids = [&] {
            std::vector<std::string> ids;
            for (const auto& n : graph.nodes) ids.push_back(n.id);
            std::sort(ids.begin(), ids.end());
            return ids;
        }();

        for (const auto& id : node_ids) {
            int v = add_var(fmt::format("rho[{}]", id), VarKind::Binary, 0, 1);
            out.index.rho[id] = v;
            out.model.objective.emplace_back(1.0, v);
        }

        for (const auto& sl : requests)
            for (const auto& sfc : sl.sfcs) {
                auto chain = effective_chain(sfc, config.pin_endpoints);
                auto& cands = cand[{sl.slice_id, sfc.id}];
                for (const auto& elem : chain) {
                    if (elem.pseudo) {
                        cands.push_back({elem.pinned_node});
                        continue;
                    }
                    auto ys = authorized_nodes(sfc.nfs[elem.nf_index], graph);
                    if (ys.empty())
                        throw Error("EmptyAuthorizedSet",
                                    fmt::format("{}/{}/{} has no authorized host", sl.slice_id,
                                                sfc.id, elem.id));
                    cands.push_back(std::move(ys));
                }

                for (std::size_t pos = 0; pos < chain.size(); ++pos)
                    for (const auto& v : cands[pos])
                        out.index.y[{sl.slice_id, sfc.id, static_cast<int>(pos), v}] =
                            add_var(fmt::format("Y[{},{},{},{}]", sl.slice_id, sfc.id,
                                                chain[pos].id, v),
                                    VarKind::Binary, 0, 1);

                for (std::size_t pos = 1; pos < chain.size(); ++pos) {
                    int hop = static_cast<int>(pos);  // joins positions hop-1 and hop
                    out.index.phi_l[{sl.slice_id, sfc.id, hop}] =
                        add_var(fmt::format("phiL[{},{},{}]", sl.slice_id, sfc.id, hop),
                                VarKind::Continuous, 0, sfc.latency_budget);
                    for (const auto& u : cands[pos - 1])
                        for (const auto& v : cands[pos]) {
                            if (!pairs.count({u, v})) continue;
                            VariableIndex::HopPair key{sl.slice_id, sfc.id, hop, u, v};
                            auto tag = fmt::format("[{},{},{},{},{}]", sl.slice_id, sfc.id, hop, u, v);
                            out.index.z[key] = add_var("Z" + tag, VarKind::Binary, 0, 1);
                            out.index.phi_l_uv[key] =
                                add_var("phiLuv" + tag, VarKind::Continuous, 0,
                                        std::numeric_limits<double>::infinity());
                            out.index.phi_b_uv[key] =
                                add_var("phiBuv" + tag, VarKind::Continuous, 0,
                                        std::numeric_limits<double>::infinity());
                        }
                }
                out.index.chains[{sl.slice_id, sfc.id}] = std::move(chain);
            }

        emit_placement();
        emit_node_active();
        emit_resource();
        emit_link_onehot();
        emit_link_coupling();
        emit_latency();
        emit_bandwidth();
    }

    // iterate chains in request order (the variable-emission order)
    template <typename F>
    void for_each_chain(F&& f) const {
        for (const auto& sl : requests)
            for (const auto& sfc : sl.sfcs)
                f(sl, sfc, out.index.chains.at({sl.slice_id, sfc.id}),
                  cand.at({sl.slice_id, sfc.id}));
    }

    int y_id(const std::string& sl, const std::string& sfc, int pos, const std::string& v) const {
        return out.index.y.at({sl, sfc, pos, v});
    }

    void emit_placement() {
        for_each_chain([&](const SliceRequest& sl, const SFCSpec& sfc,
                           const std::vector<ChainElement>& chain, const auto& cands) {
            for (std::size_t pos = 0; pos < chain.size(); ++pos) {
                std::vector<std::pair<double, int>> terms;
                for (const auto& v : cands[pos])
                    terms.emplace_back(1.0, y_id(sl.slice_id, sfc.id, static_cast<int>(pos), v));
                add_row(std::move(terms), Relation::Eq, 1.0, Family::Placement);
            }
        });
    }

    void emit_node_active() {
        for_each_chain([&](const SliceRequest& sl, const SFCSpec& sfc,
                           const std::vector<ChainElement>& chain, const auto& cands) {
            for (std::size_t pos = 0; pos < chain.size(); ++pos) {
                if (chain[pos].pseudo) continue;  // endpoints do not activate nodes
                for (const auto& v : cands[pos])
                    add_row({{1.0, out.index.rho.at(v)},
                             {-1.0, y_id(sl.slice_id, sfc.id, static_cast<int>(pos), v)}},
                            Relation::Ge, 0.0, Family::NodeActive);
            }
        });
    }

    void emit_resource() {
        // gather Y terms per node, in variable-emission order
        std::map<std::string, std::vector<std::pair<int, const ResourceVector*>>> per_node;
        for_each_chain([&](const SliceRequest& sl, const SFCSpec& sfc,
                           const std::vector<ChainElement>& chain, const auto& cands) {
            for (std::size_t pos = 0; pos < chain.size(); ++pos) {
                if (chain[pos].pseudo) continue;  // zero demand
                const auto& demand = sfc.nfs[chain[pos].nf_index].demand;
                for (const auto& v : cands[pos])
                    per_node[v].emplace_back(y_id(sl.slice_id, sfc.id, static_cast<int>(pos), v),
                                             &demand);
            }
        });
        std::vector<std::string> node_ids;
        for (const auto& [id, _] : per_node) node_ids.push_back(id);
        for (const auto& id : node_ids) {
            const auto* node = graph.find_node(id);
            for (std::size_t r = 0; r < graph.resource_kinds.size(); ++r) {
                std::vector<std::pair<double, int>> terms;
                for (const auto& [var, demand] : per_node[id])
                    if (r < demand->size() && (*demand)[r] > 0)
                        terms.emplace_back((*demand)[r], var);
                if (terms.empty()) continue;  // vacuous: zero demand ≤ capacity
                add_row(std::move(terms), Relation::Le, node->capacity[r], Family::Resource);
            }
        }
    }

    template <typename F>
    void for_each_hop_pair(const SliceRequest& sl, const SFCSpec& sfc,
                           const std::vector<ChainElement>& chain, const auto& cands, F&& f) const {
        for (std::size_t pos = 1; pos < chain.size(); ++pos) {
            int hop = static_cast<int>(pos);
            for (const auto& u : cands[pos - 1])
                for (const auto& v : cands[pos]) {
                    auto it = out.index.z.find({sl.slice_id, sfc.id, hop, u, v});
                    if (it != out.index.z.end()) f(hop, u, v, it->second);
                }
        }
    }

    void emit_link_onehot() {
        for_each_chain([&](const SliceRequest& sl, const SFCSpec& sfc,
                           const std::vector<ChainElement>& chain, const auto& cands) {
            for (std::size_t pos = 1; pos < chain.size(); ++pos) {
                int hop = static_cast<int>(pos);
                std::vector<std::pair<double, int>> terms;
                for (const auto& u : cands[pos - 1])
                    for (const auto& v : cands[pos]) {
                        auto it = out.index.z.find({sl.slice_id, sfc.id, hop, u, v});
                        if (it != out.index.z.end()) terms.emplace_back(1.0, it->second);
                    }
                // an empty row is an unsatisfiable 0 = 1: the hop has no
                // eligible pair and the instance is infeasible as built
                add_row(std::move(terms), Relation::Eq, 1.0, Family::LinkOneHot);
            }
        });
    }

    void emit_link_coupling() {
        for_each_chain([&](const SliceRequest& sl, const SFCSpec& sfc,
                           const std::vector<ChainElement>& chain, const auto& cands) {
            for_each_hop_pair(sl, sfc, chain, cands,
                              [&](int hop, const std::string& u, const std::string& v, int z) {
                int yu = y_id(sl.slice_id, sfc.id, hop - 1, u);
                int yv = y_id(sl.slice_id, sfc.id, hop, v);
                add_row({{1.0, z}, {-1.0, yu}}, Relation::Le, 0.0, Family::LinkCoupling);
                add_row({{1.0, z}, {-1.0, yv}}, Relation::Le, 0.0, Family::LinkCoupling);
                add_row({{1.0, z}, {-1.0, yu}, {-1.0, yv}}, Relation::Ge, -1.0,
                        Family::LinkCoupling);
            });
        });
    }

    void emit_latency() {
        for_each_chain([&](const SliceRequest& sl, const SFCSpec& sfc,
                           const std::vector<ChainElement>& chain, const auto&) {
            if (chain.size() < 2) return;
            std::vector<std::pair<double, int>> budget;
            for (std::size_t pos = 1; pos < chain.size(); ++pos)
                budget.emplace_back(
                    1.0, out.index.phi_l.at({sl.slice_id, sfc.id, static_cast<int>(pos)}));
            add_row(std::move(budget), Relation::Le, sfc.latency_budget, Family::LatencyBudget);
        });
        for_each_chain([&](const SliceRequest& sl, const SFCSpec& sfc,
                           const std::vector<ChainElement>& chain, const auto& cands) {
            for_each_hop_pair(sl, sfc, chain, cands,
                              [&](int hop, const std::string& u, const std::string& v, int z) {
                VariableIndex::HopPair key{sl.slice_id, sfc.id, hop, u, v};
                int pl = out.index.phi_l.at({sl.slice_id, sfc.id, hop});
                int pluv = out.index.phi_l_uv.at(key);
                // pair budget tracks the hop budget when the pair is used
                add_row({{1.0, pluv}, {-1.0, pl}, {m, z}}, Relation::Le, m,
                        Family::LatencyLinearization);
                add_row({{1.0, pl}, {-1.0, pluv}, {m, z}}, Relation::Le, m,
                        Family::LatencyLinearization);
                // used pair must fit its budget: latency(u,v) ≤ φ^{L,u,v} + (1-Z)·M
                add_row({{-1.0, pluv}, {m, z}}, Relation::Le, m - pairs.at({u, v}).latency,
                        Family::LatencyLink);
            });
        });
    }

    void emit_bandwidth() {
        // per-hop demand is the constant w (see header note), so the demand
        // family needs no rows; the linearization pins φ^{B,u,v} to w·Z
        std::map<PairKey, std::vector<std::pair<double, int>>> capacity_terms;
        for_each_chain([&](const SliceRequest& sl, const SFCSpec& sfc,
                           const std::vector<ChainElement>& chain, const auto& cands) {
            for_each_hop_pair(sl, sfc, chain, cands,
                              [&](int hop, const std::string& u, const std::string& v, int z) {
                VariableIndex::HopPair key{sl.slice_id, sfc.id, hop, u, v};
                int pbuv = out.index.phi_b_uv.at(key);
                double w = sfc.hop_bandwidth;
                add_row({{1.0, pbuv}, {m, z}}, Relation::Le, m + w, Family::BwLinearization);
                add_row({{-1.0, pbuv}, {m, z}}, Relation::Le, m - w, Family::BwLinearization);
                add_row({{1.0, pbuv}, {-m, z}}, Relation::Le, 0.0, Family::BwLinearization);
                if (u != v) capacity_terms[canonical_pair(u, v)].emplace_back(1.0, pbuv);
            });
        });
        // one joint capacity row per physical (unordered) pair: both
        // orientations draw from the same pool
        for (auto& [key, terms] : capacity_terms)
            add_row(std::move(terms), Relation::Le, pairs.at(key).bandwidth, Family::BwCapacity);
    }
};

std::string fmt_num(double v) { return fmt::format("{}", v); }

std::string format_terms(const std::vector<std::pair<double, int>>& terms,
                         const std::vector<MilpVariable>& vars) {
    if (terms.empty()) return fmt::format("0 {}", vars.at(0).name);
    std::string s;
    bool first = true;
    for (const auto& [c, id] : terms) {
        double a = std::abs(c);
        std::string t = a == 1.0 ? vars[id].name : fmt::format("{} {}", fmt_num(a), vars[id].name);
        if (first) {
            s = (c < 0 ? "- " : "") + t;
            first = false;
        } else {
            s += (c < 0 ? " - " : " + ") + t;
        }
    }
    return s;
}

std::vector<std::string> constraint_names(const MilpModel& model) {
    std::vector<std::string> names;
    std::map<Family, int> counters;
    for (const auto& c : model.constraints)
        names.push_back(fmt::format("{}_{}", to_string(c.family), ++counters[c.family]));
    return names;
}

}  // namespace

BuiltModel build_model(const SubstrateGraph& graph, const std::vector<SliceRequest>& requests,
                       const BuildConfig& config) {
    Builder b{graph, requests, config, {}, 0.0, {}, {}};
    b.run();
    return std::move(b.out);
}

std::string export_lp(const MilpModel& model) {
    std::string s = "Minimize\n obj: " + format_terms(model.objective, model.variables) + "\n";
    s += "Subject To\n";
    auto names = constraint_names(model);
    for (std::size_t i = 0; i < model.constraints.size(); ++i) {
        const auto& c = model.constraints[i];
        const char* rel = c.relation == Relation::Le ? "<=" : c.relation == Relation::Ge ? ">=" : "=";
        s += fmt::format(" {}: {} {} {}\n", names[i], format_terms(c.terms, model.variables), rel,
                         fmt_num(c.rhs));
    }
    s += "Bounds\n";
    for (const auto& v : model.variables)
        if (v.kind == VarKind::Continuous && std::isfinite(v.upper))
            s += fmt::format(" {} <= {}\n", v.name, fmt_num(v.upper));
    s += "Binary\n";
    for (const auto& v : model.variables)
        if (v.kind == VarKind::Binary) s += " " + v.name + "\n";
    s += "End\n";
    return s;
}

EvalReport evaluate(const MilpModel& model, const std::vector<double>& values, double tol) {
    if (values.size() != model.variables.size())
        throw Error("SizeMismatch", fmt::format("{} values for {} variables", values.size(),
                                                model.variables.size()));
    EvalReport rep;
    for (const auto& v : model.variables) {
        double x = values[v.id];
        if (x < v.lower - tol || x > v.upper + tol)
            rep.violations.push_back({v.name + " out of bounds",
                                      std::max(v.lower - x, x - v.upper)});
        if (v.kind == VarKind::Binary && std::abs(x - std::round(x)) > tol)
            rep.violations.push_back({v.name + " not integral", std::abs(x - std::round(x))});
    }
    auto names = constraint_names(model);
    for (std::size_t i = 0; i < model.constraints.size(); ++i) {
        const auto& c = model.constraints[i];
        double lhs = 0.0;
        for (const auto& [coef, id] : c.terms) lhs += coef * values[id];
        double viol = 0.0;
        switch (c.relation) {
            case Relation::Le: viol = lhs - c.rhs; break;
            case Relation::Ge: viol = c.rhs - lhs; break;
            case Relation::Eq: viol = std::abs(lhs - c.rhs); break;
        }
        if (viol > tol) rep.violations.push_back({names[i], viol});
    }
    rep.feasible = rep.violations.empty();
    for (const auto& [coef, id] : model.objective) rep.objective_value += coef * values[id];
    return rep;
}

PlacementSolution decode(const MilpModel& model, const VariableIndex& index,
                         const std::vector<double>& values) {
    if (values.size() != model.variables.size())
        throw Error("SizeMismatch", "value vector does not match the model");
    PlacementSolution sol;
    sol.status = SolveStatus::Optimal;
    for (const auto& [node, id] : index.rho)
        if (values[id] > 0.5) sol.active_nodes.insert(node);
    for (const auto& [key, id] : index.y) {
        if (values[id] <= 0.5) continue;
        const auto& [slice, sfc, pos, node] = key;
        const auto& elem = index.chains.at({slice, sfc}).at(pos);
        if (!elem.pseudo) sol.assignment[{slice, sfc, elem.id}] = node;
    }
    for (const auto& [key, id] : index.z) {
        if (values[id] <= 0.5) continue;
        const auto& [slice, sfc, hop, u, v] = key;
        sol.routing[{slice, sfc, hop}] = {u, v};
    }
    for (const auto& [key, id] : index.phi_l) {
        const auto& [slice, sfc, hop] = key;
        sol.hop_latency_budget[{slice, sfc, hop}] = values[id];
    }
    sol.objective = static_cast<int>(sol.active_nodes.size());
    return sol;
}

std::vector<double> encode(const MilpModel& model, const VariableIndex& index,
                           const std::vector<SliceRequest>& requests,
                           const PlacementSolution& solution) {
    std::vector<double> vals(model.variables.size(), 0.0);
    std::map<std::pair<std::string, std::string>, double> hop_bw;
    for (const auto& sl : requests)
        for (const auto& sfc : sl.sfcs) hop_bw[{sl.slice_id, sfc.id}] = sfc.hop_bandwidth;

    for (const auto& [node, id] : index.rho)
        vals[id] = solution.active_nodes.count(node) ? 1.0 : 0.0;
    for (const auto& [key, id] : index.y) {
        const auto& [slice, sfc, pos, node] = key;
        const auto& elem = index.chains.at({slice, sfc}).at(pos);
        if (elem.pseudo) {
            vals[id] = node == elem.pinned_node ? 1.0 : 0.0;
        } else {
            auto it = solution.assignment.find({slice, sfc, elem.id});
            vals[id] = it != solution.assignment.end() && it->second == node ? 1.0 : 0.0;
        }
    }
    for (const auto& [key, id] : index.z) {
        const auto& [slice, sfc, hop, u, v] = key;
        auto it = solution.routing.find({slice, sfc, hop});
        vals[id] = it != solution.routing.end() && it->second == std::make_pair(u, v) ? 1.0 : 0.0;
    }
    for (const auto& [key, id] : index.phi_l) {
        const auto& [slice, sfc, hop] = key;
        auto it = solution.hop_latency_budget.find({slice, sfc, hop});
        vals[id] = it != solution.hop_latency_budget.end() ? it->second : 0.0;
    }
    for (const auto& [key, id] : index.phi_l_uv) {
        const auto& [slice, sfc, hop, u, v] = key;
        if (vals[index.z.at(key)] > 0.5) vals[id] = vals[index.phi_l.at({slice, sfc, hop})];
    }
    for (const auto& [key, id] : index.phi_b_uv) {
        const auto& [slice, sfc, hop, u, v] = key;
        if (vals[index.z.at(key)] > 0.5) vals[id] = hop_bw.at({slice, sfc});
    }
    return vals;
}

}  // namespace chainplace
