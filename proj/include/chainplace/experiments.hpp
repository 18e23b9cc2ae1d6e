#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chainplace/scenario.hpp"
#include "chainplace/solver.hpp"

namespace chainplace {

// One solved repetition. Together with the plan shape, `seed` pins the full
// instance: substrate and requests regenerate bit-exactly from it.
struct ExperimentRecord {
    std::string preset;
    int slices = 0;
    int sfcs = 0;
    int nfs = 0;
    int nodes = 0;  // substrate hosts at this sweep point
    std::uint64_t seed = 0;
    int active_nodes = 0;
    double solve_time_s = 0.0;
    SolveStatus status = SolveStatus::Optimal;
};

// Which record field an experiment sweeps; the x axis of plots and
// regressions.
enum class Swept { Slices, Sfcs, Nfs };

Swept swept_for(const std::string& preset_name);
double swept_value(const ExperimentRecord& record, Swept swept);

// Least-squares line y = alpha * x + beta.
struct Regression {
    double alpha = 0.0;
    double beta = 0.0;
};

// Throws RegressionUndefined unless x holds at least two distinct values.
Regression ols(const std::vector<double>& x, const std::vector<double>& y);

struct MeanCi {
    std::size_t count = 0;
    double mean = 0.0;
    double stddev = 0.0;        // sample (n-1); 0 for a single value
    double ci_half_width = 0.0; // 1.96 * stddev / sqrt(n)
};

MeanCi mean_ci(const std::vector<double>& values);

// Statistics over a set of records: active-node location plus the two
// labeled solve-time regressions (against the swept count and against the
// active-node count). A regression is absent when its x values don't vary.
struct AggregateStats {
    MeanCi active;
    std::optional<Regression> time_on_swept;
    std::optional<Regression> time_on_active;
};

AggregateStats aggregate(const std::vector<ExperimentRecord>& records,
                         Swept swept = Swept::Slices);

struct ExperimentResult {
    ExperimentPlan plan;
    std::vector<ExperimentRecord> records;   // point-major, repetition order
    std::vector<AggregateStats> per_point;   // aligned with plan.points
};

// Generates and solves plan.repetitions instances per sweep point on a pool
// of `parallelism` workers. Record contents other than solve_time_s are
// deterministic under master_seed regardless of parallelism. TIMEOUT and
// INFEASIBLE outcomes are recorded per repetition, never fatal.
ExperimentResult run_experiment(const ExperimentPlan& plan, std::uint64_t master_seed,
                                int parallelism = 1, const SolverLimits& limits = {},
                                const BuildConfig& config = {});

// Record CSV, lossless round-trip. Header:
//   preset,slices,sfcs,nfs,nodes,seed,active_nodes,solve_time_s,status
std::string records_to_csv(const std::vector<ExperimentRecord>& records);
std::vector<ExperimentRecord> records_from_csv(const std::string& text);

// Plot-ready per-point series (header x,mean,ci,time_mean,time_ci): active
// nodes and solve time against the swept count, one row per sweep point.
std::string plot_csv(const ExperimentResult& result);

// Same table recovered from bare records (e.g. a CSV read back in); rows are
// grouped by (swept value, substrate size) in ascending order.
std::string plot_csv(const std::vector<ExperimentRecord>& records, Swept swept);

// Custom plan files: {"name", "repetitions", "base": <GenParams>,
// "points": [{"slices", "sfcs", "nfs", "hosts"}, ...]}.
ExperimentPlan plan_from_json_text(const std::string& text);
std::string plan_to_json_text(const ExperimentPlan& plan);

}  // namespace chainplace
