#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chainplace/model.hpp"

namespace chainplace {

// Closed interval for discrete-uniform draws. Values are drawn as integers
// and stored as doubles, so generated instances round-trip exactly through
// the JSON formats.
struct ValueRange {
    double lo = 0.0;
    double hi = 0.0;
};

// Knobs of the random substrate/workload generator. A GenParams value plus a
// seed determines every generated byte; there is no hidden global state.
//
// Capacity defaults are sized so the slice sweep saturates the default
// 12-host substrate gradually instead of going infeasible: hosts of 1750
// units absorb roughly two dozen NFs drawing from [50,100], which keeps
// thirty-plus concurrent slices placeable while still forcing most of the
// substrate active. Homogeneous capacities (and balanced demand profiles
// below) also keep the bound proof cheap, so sweeps solve to optimality
// instead of drowning in near-tie packings.
struct GenParams {
    int n_hosts = 12;
    int n_connectors = 0;    // capacity-free transit nodes (never host NFs)
    double connectivity = 0.9;  // independent probability per node pair

    std::vector<std::string> resource_kinds = {"cpu", "ram", "disk"};
    // One range per resource kind, aligned with resource_kinds.
    std::vector<ValueRange> host_capacity = {{1750, 1750}, {1750, 1750}, {1750, 1750}};
    ValueRange link_capacity = {500, 1000};
    ValueRange link_latency = {1, 5};
    // NF demands (every kind), per-SFC hop bandwidth and latency budget.
    ValueRange demand = {50, 100};
    // One draw per NF replicated across kinds (balanced profiles), or an
    // independent draw per kind.
    bool balanced_demand = true;

    std::uint64_t seed = 0;
};

// Deterministic 64-bit generator (splitmix64 steps). Uses its own bounded
// mapping so draws are identical across platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();
    // Inclusive discrete uniform.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
    double draw(const ValueRange& r);  // discrete draw over [lo, hi]
    bool chance(double p);

    // Derives an independent stream seed; used for retry sub-seeds and for
    // decoupling substrate draws from request draws.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

private:
    std::uint64_t state_;
};

// Random connected substrate. Hosts are n00..; connectors (if any) are t00..
// and carry zero capacity. Retries with derived sub-seeds until the sampled
// graph is connected.
//
// Throws InvalidParams on malformed params, GenerationFailed when no
// connected graph shows up within the retry budget.
SubstrateGraph gen_substrate(const GenParams& params);

// Random workload: n_slices slices of n_sfcs chains with n_nfs NFs each,
// demands and budgets drawn from params.demand, placement unrestricted.
// Deterministic under params.seed and independent of gen_substrate's draws.
std::vector<SliceRequest> gen_requests(int n_slices, int n_sfcs, int n_nfs,
                                       const GenParams& params);

// One sweep point of an experiment plan: request-shape counts plus the
// substrate host count used at that point.
struct ConfigPoint {
    int slices = 1;
    int sfcs = 1;
    int nfs = 1;
    int hosts = 12;
};

struct ExperimentPlan {
    std::string name;
    std::vector<ConfigPoint> points;
    int repetitions = 100;
    GenParams base;  // per-instance seeds are derived by the runner
};

// The four canned sweeps. Unknown names throw UnknownPreset.
//   VARY_SLICES   slices 1..50, 2 SFCs x 4 NFs, 12 hosts
//   VARY_SFCS     SFCs 2..20 (chains of 4), 2 slices, 12 hosts
//   VARY_NFS      NFs 2..20 per chain, 5 slices x 2 SFCs, 12 hosts
//   SCALE_COMPARE the slice sweep on fixed 12 hosts, then again with the
//                 substrate growing alongside the slice count
ExperimentPlan preset(const std::string& name);

// JSON (de)serialization for generator knobs; missing fields keep defaults.
GenParams gen_params_from_json_text(const std::string& text);
std::string gen_params_to_json_text(const GenParams& params);

}  // namespace chainplace
