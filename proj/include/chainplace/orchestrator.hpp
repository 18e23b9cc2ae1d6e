#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chainplace/io.hpp"
#include "chainplace/model.hpp"
#include "chainplace/solver.hpp"

namespace chainplace {

// Re-optimization control loop: accept new or updated slice requests, solve,
// keep residual accounting, and log every decision.
//
// FULL_REOPT re-plans all active slices from scratch on every submit (already
// placed NFs may migrate; the consolidated solution is globally optimal for
// the active set). INCREMENTAL leaves placed slices alone and solves each new
// request against the residual capacities left by the others.

enum class OrchestratorMode { FullReopt, Incremental };

std::string to_string(OrchestratorMode mode);
OrchestratorMode orchestrator_mode_from_string(const std::string& text);

enum class EventKind { RequestAccepted, Placed, RejectedInfeasible, Replanned };

std::string to_string(EventKind kind);

struct OrchestratorEvent {
    std::size_t sequence = 0;  // position in the append-only log
    std::optional<double> at;  // timestamp carried by the request, if any
    EventKind kind = EventKind::RequestAccepted;
    std::string slice_id;
    std::int64_t revision = 0;
    std::string detail;  // objective on success, reason on rejection
};

struct OrchestratorState {
    SubstrateGraph base;
    OrchestratorMode mode = OrchestratorMode::FullReopt;
    BuildConfig config;
    SolverLimits limits;

    std::map<std::string, SliceRequest> active;  // keyed by slice_id
    // Union view over everything placed. In FULL_REOPT this is the solver
    // output itself; in INCREMENTAL it is the merge of the per-slice
    // solutions below.
    PlacementSolution consolidated;
    std::map<std::string, PlacementSolution> per_slice;  // INCREMENTAL bookkeeping
    std::vector<OrchestratorEvent> events;
};

// Applies one request (new or updated) and returns the decision event
// (PLACED, REPLANNED, or REJECTED_INFEASIBLE), which is also appended to
// state.events after a REQUEST_ACCEPTED entry. A rejection leaves every
// prior placement untouched — updates release their old consumption only
// when the replacement actually solves. Throws Error("StaleRevision") when
// the revision does not exceed the stored one, Error("InvalidRequest") when
// the request does not validate against the base graph; both leave the
// state unchanged.
const OrchestratorEvent& submit(OrchestratorState& state, const SliceRequest& request,
                                std::optional<double> at = std::nullopt);

// Pulls requests from `source` until it is exhausted (nullopt) or `stop`
// returns true, feeding each into submit. Submit errors become
// REJECTED_INFEASIBLE log entries; the loop never aborts.
OrchestratorState& run_loop(OrchestratorState& state,
                            const std::function<std::optional<TimedRequest>()>& source,
                            const std::function<bool()>& stop = {});

// Base graph minus the consumption of everything currently placed. Also the
// conservation check: it throws Error("NegativeResidual") if bookkeeping
// ever oversubscribed a capacity, which submit re-asserts after every event.
SubstrateGraph current_residual(const OrchestratorState& state);

// One JSON object per line, in log order.
std::string event_log_to_jsonl(const std::vector<OrchestratorEvent>& events);

}  // namespace chainplace
