#include "chainplace/orchestrator.hpp"

#include <fmt/format.h>
#include <json.hpp>

namespace chainplace {

namespace {

const OrchestratorEvent& push_event(OrchestratorState& state, std::optional<double> at,
                                    EventKind kind, const SliceRequest& request,
                                    std::string detail) {
    state.events.push_back(
        {state.events.size(), at, kind, request.slice_id, request.revision, std::move(detail)});
    return state.events.back();
}

void rebuild_consolidated(OrchestratorState& state) {
    PlacementSolution merged;
    merged.status = SolveStatus::Optimal;
    for (const auto& [id, sol] : state.per_slice) {
        merged.assignment.insert(sol.assignment.begin(), sol.assignment.end());
        merged.routing.insert(sol.routing.begin(), sol.routing.end());
        merged.hop_latency_budget.insert(sol.hop_latency_budget.begin(),
                                         sol.hop_latency_budget.end());
        merged.active_nodes.insert(sol.active_nodes.begin(), sol.active_nodes.end());
    }
    merged.objective = static_cast<int>(merged.active_nodes.size());
    state.consolidated = std::move(merged);
}

std::string reject_reason(const PlacementSolution& solution) {
    if (solution.status == SolveStatus::Timeout)
        return "solver gave up: " + solution.diagnostics;
    return solution.diagnostics;
}

}  // namespace

std::string to_string(OrchestratorMode mode) {
    return mode == OrchestratorMode::FullReopt ? "FULL_REOPT" : "INCREMENTAL";
}

OrchestratorMode orchestrator_mode_from_string(const std::string& text) {
    if (text == "FULL_REOPT") return OrchestratorMode::FullReopt;
    if (text == "INCREMENTAL") return OrchestratorMode::Incremental;
    throw Error("ParseError", "unknown orchestrator mode: " + text);
}

std::string to_string(EventKind kind) {
    switch (kind) {
        case EventKind::RequestAccepted: return "REQUEST_ACCEPTED";
        case EventKind::Placed: return "PLACED";
        case EventKind::RejectedInfeasible: return "REJECTED_INFEASIBLE";
        case EventKind::Replanned: return "REPLANNED";
    }
    return "?";
}

const OrchestratorEvent& submit(OrchestratorState& state, const SliceRequest& request,
                                std::optional<double> at) {
    const auto stored = state.active.find(request.slice_id);
    const bool update = stored != state.active.end();
    if (update && request.revision <= stored->second.revision)
        throw Error("StaleRevision",
                    fmt::format("slice {} is already at revision {}", request.slice_id,
                                stored->second.revision));
    const auto errors = validate(state.base, {request});
    if (!errors.empty())
        throw Error("InvalidRequest", fmt::format("{} ({}): {}", errors.front().code,
                                                  errors.front().subject, errors.front().message));

    push_event(state, at, EventKind::RequestAccepted, request, "");

    if (state.mode == OrchestratorMode::FullReopt) {
        auto candidate = state.active;
        candidate[request.slice_id] = request;
        std::vector<SliceRequest> all;
        all.reserve(candidate.size());
        for (const auto& [id, r] : candidate) all.push_back(r);
        auto solution = solve_exact(state.base, all, state.config, state.limits);
        if (solution.status != SolveStatus::Optimal)
            return push_event(state, at, EventKind::RejectedInfeasible, request,
                              reject_reason(solution));
        state.active = std::move(candidate);
        state.consolidated = std::move(solution);
        current_residual(state);  // conservation assertion
        return push_event(state, at, update ? EventKind::Replanned : EventKind::Placed, request,
                          fmt::format("objective {}", state.consolidated.objective));
    }

    // INCREMENTAL: solve only the new request against what the others left
    // over. An update's own prior consumption is released for the solve and
    // definitively dropped only if the replacement fits.
    SubstrateGraph residual = state.base;
    for (const auto& [id, sol] : state.per_slice) {
        if (id == request.slice_id) continue;
        residual = residual_apply(residual, {state.active.at(id)}, sol, state.config.mode);
    }
    auto solution = solve_exact(residual, {request}, state.config, state.limits);
    if (solution.status != SolveStatus::Optimal)
        return push_event(state, at, EventKind::RejectedInfeasible, request,
                          reject_reason(solution));
    state.active[request.slice_id] = request;
    state.per_slice[request.slice_id] = std::move(solution);
    rebuild_consolidated(state);
    current_residual(state);  // conservation assertion
    return push_event(state, at, update ? EventKind::Replanned : EventKind::Placed, request,
                      fmt::format("objective {}", state.consolidated.objective));
}

OrchestratorState& run_loop(OrchestratorState& state,
                            const std::function<std::optional<TimedRequest>()>& source,
                            const std::function<bool()>& stop) {
    for (;;) {
        if (stop && stop()) break;
        const auto next = source();
        if (!next) break;
        try {
            submit(state, next->request, next->at);
        } catch (const Error& e) {
            state.events.push_back({state.events.size(), next->at,
                                    EventKind::RejectedInfeasible, next->request.slice_id,
                                    next->request.revision, e.code() + ": " + e.message()});
        }
    }
    return state;
}

SubstrateGraph current_residual(const OrchestratorState& state) {
    if (state.mode == OrchestratorMode::FullReopt) {
        std::vector<SliceRequest> all;
        all.reserve(state.active.size());
        for (const auto& [id, r] : state.active) all.push_back(r);
        return residual_apply(state.base, all, state.consolidated, state.config.mode);
    }
    SubstrateGraph residual = state.base;
    for (const auto& [id, sol] : state.per_slice)
        residual = residual_apply(residual, {state.active.at(id)}, sol, state.config.mode);
    return residual;
}

std::string event_log_to_jsonl(const std::vector<OrchestratorEvent>& events) {
    std::string out;
    for (const auto& e : events) {
        nlohmann::json j;
        j["seq"] = e.sequence;
        if (e.at) j["at"] = *e.at;
        j["kind"] = to_string(e.kind);
        j["slice"] = e.slice_id;
        j["revision"] = e.revision;
        j["detail"] = e.detail;
        out += j.dump();
        out += '\n';
    }
    return out;
}

}  // namespace chainplace
