// chainplace — place service chains onto a substrate, check solutions,
// generate workloads, replay request sequences, and run the experiment
// sweeps. Exit codes: 0 success, 2 infeasible / failed verification,
// 3 timeout, 1 usage or input errors.

#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "chainplace/experiments.hpp"
#include "chainplace/io.hpp"
#include "chainplace/milp.hpp"
#include "chainplace/orchestrator.hpp"
#include "chainplace/verifier.hpp"

using namespace chainplace;

namespace {

int status_exit_code(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return 0;
        case SolveStatus::Infeasible: return 2;
        case SolveStatus::Timeout: return 3;
    }
    return 1;
}

struct SolveArgs {
    std::string instance;
    std::string mode = "direct";
    double time_limit = 60.0;
    int workers = 1;
    std::string export_lp_path;
    std::string out;
};

int run_solve(const SolveArgs& a) {
    const auto inst = load_instance(a.instance);
    BuildConfig config;
    config.mode = a.mode == "mesh" ? PairMode::LogicalMesh : PairMode::Direct;
    SolverLimits limits;
    limits.time_budget = a.time_limit;
    limits.workers = a.workers;

    if (!a.export_lp_path.empty()) {
        const auto built = build_model(inst.graph, inst.slices, config);
        write_text_file(a.export_lp_path, export_lp(built.model));
        fmt::print("wrote LP to {}\n", a.export_lp_path);
    }

    const auto solution = solve_exact(inst.graph, inst.slices, config, limits);
    fmt::print("status {}\n", to_string(solution.status));
    if (solution.status != SolveStatus::Infeasible) {
        fmt::print("objective {}\n", solution.objective);
        std::string nodes;
        for (const auto& n : solution.active_nodes) nodes += (nodes.empty() ? "" : " ") + n;
        fmt::print("active {}\n", nodes);
    }
    if (!solution.diagnostics.empty()) fmt::print("note {}\n", solution.diagnostics);
    if (!a.out.empty()) save_solution(solution, a.out);
    return status_exit_code(solution.status);
}

int run_verify(const std::string& instance_path, const std::string& solution_path,
               const std::string& mode, bool pin_endpoints) {
    const auto inst = load_instance(instance_path);
    const auto solution = load_solution(solution_path);
    BuildConfig config;
    config.mode = mode == "mesh" ? PairMode::LogicalMesh : PairMode::Direct;
    config.pin_endpoints = pin_endpoints;
    const auto report = verify(inst.graph, inst.slices, solution, config);
    fmt::print("{}", to_text(report));
    return report.overall ? 0 : 2;
}

struct GenArgs {
    std::string params_path;
    std::string out;
    int slices = 0, sfcs = 0, nfs = 0;  // 0 = take from the params file
    std::optional<std::uint64_t> seed;
};

int run_gen(const GenArgs& a) {
    const auto text = read_text_file(a.params_path);
    auto params = gen_params_from_json_text(text);
    if (a.seed) params.seed = *a.seed;

    int slices = a.slices, sfcs = a.sfcs, nfs = a.nfs;
    const auto doc = nlohmann::json::parse(text);
    if (doc.contains("requests")) {
        const auto& r = doc.at("requests");
        if (slices == 0 && r.contains("slices")) slices = r.at("slices").get<int>();
        if (sfcs == 0 && r.contains("sfcs")) sfcs = r.at("sfcs").get<int>();
        if (nfs == 0 && r.contains("nfs")) nfs = r.at("nfs").get<int>();
    }

    Instance inst;
    inst.graph = gen_substrate(params);
    if (slices > 0 || sfcs > 0 || nfs > 0)
        inst.slices = gen_requests(std::max(slices, 1), std::max(sfcs, 1), std::max(nfs, 1),
                                   params);
    save_instance(inst, a.out);
    fmt::print("wrote {} hosts, {} slices to {}\n", inst.graph.host_ids_sorted().size(),
               inst.slices.size(), a.out);
    return 0;
}

struct OrchestrateArgs {
    std::string sequence_path;
    std::string substrate_path;
    std::string mode = "full";
    std::string events_path;
    double time_limit = 60.0;
};

int run_orchestrate(const OrchestrateArgs& a) {
    const auto sequence = load_request_sequence(a.sequence_path);
    OrchestratorState state;
    state.base = load_instance(a.substrate_path).graph;
    state.mode =
        a.mode == "incremental" ? OrchestratorMode::Incremental : OrchestratorMode::FullReopt;
    state.limits.time_budget = a.time_limit;

    std::size_t cursor = 0;
    run_loop(state, [&]() -> std::optional<TimedRequest> {
        if (cursor == sequence.size()) return std::nullopt;
        return sequence[cursor++];
    });

    const auto log = event_log_to_jsonl(state.events);
    fmt::print("{}", log);
    if (!a.events_path.empty()) write_text_file(a.events_path, log);
    return 0;
}

struct ExperimentArgs {
    std::string plan;
    std::uint64_t seed = 0;
    int reps = 0;       // 0 = keep the plan's count
    int points = 0;     // 0 = keep every sweep point
    int jobs = 1;
    double time_limit = 60.0;
    std::string out;
    std::string plot_path;
};

int run_experiment_cmd(const ExperimentArgs& a) {
    ExperimentPlan plan;
    if (a.plan == "VARY_SLICES" || a.plan == "VARY_SFCS" || a.plan == "VARY_NFS" ||
        a.plan == "SCALE_COMPARE")
        plan = preset(a.plan);
    else
        plan = plan_from_json_text(read_text_file(a.plan));
    if (a.reps > 0) plan.repetitions = a.reps;
    if (a.points > 0 && static_cast<std::size_t>(a.points) < plan.points.size())
        plan.points.resize(a.points);

    SolverLimits limits;
    limits.time_budget = a.time_limit;
    const auto result = run_experiment(plan, a.seed, a.jobs, limits);

    const auto csv = records_to_csv(result.records);
    if (a.out.empty()) {
        fmt::print("{}", csv);
    } else {
        write_text_file(a.out, csv);
        fmt::print("wrote {} records to {}\n", result.records.size(), a.out);
    }
    if (!a.plot_path.empty()) write_text_file(a.plot_path, plot_csv(result));
    return 0;
}

int run_stats(const std::string& csv_path) {
    const auto records = records_from_csv(read_text_file(csv_path));
    if (records.empty()) throw Error("ParseError", "no records in " + csv_path);
    const auto swept = swept_for(records.front().preset);
    const char* axis = swept == Swept::Sfcs ? "sfcs" : swept == Swept::Nfs ? "nfs" : "slices";

    fmt::print("{}", plot_csv(records, swept));
    const auto stats = aggregate(records, swept);
    fmt::print("# active_nodes mean={} stddev={} ci95={} n={}\n", stats.active.mean,
               stats.active.stddev, stats.active.ci_half_width, stats.active.count);
    if (stats.time_on_swept)
        fmt::print("# time_on_{}: alpha={} beta={}\n", axis, stats.time_on_swept->alpha,
                   stats.time_on_swept->beta);
    else
        fmt::print("# time_on_{}: undefined (x does not vary)\n", axis);
    if (stats.time_on_active)
        fmt::print("# time_on_active: alpha={} beta={}\n", stats.time_on_active->alpha,
                   stats.time_on_active->beta);
    else
        fmt::print("# time_on_active: undefined (x does not vary)\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"service-chain placement toolkit"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    auto* solve = app.add_subcommand("solve", "solve one instance file");
    solve->add_option("instance", solve_args.instance, "instance JSON")->required();
    solve->add_option("--mode", solve_args.mode, "eligible-pair mode")
        ->check(CLI::IsMember({"direct", "mesh"}));
    solve->add_option("--time-limit", solve_args.time_limit, "seconds");
    solve->add_option("--workers", solve_args.workers, "search workers");
    solve->add_option("--export-lp", solve_args.export_lp_path, "also write the LP text here");
    solve->add_option("-o,--out", solve_args.out, "write the solution JSON here");

    std::string verify_instance, verify_solution, verify_mode = "direct";
    bool verify_pins = false;
    auto* verify_cmd = app.add_subcommand("verify", "check a solution against an instance");
    verify_cmd->add_option("instance", verify_instance, "instance JSON")->required();
    verify_cmd->add_option("solution", verify_solution, "solution JSON")->required();
    verify_cmd->add_option("--mode", verify_mode, "eligible-pair mode")
        ->check(CLI::IsMember({"direct", "mesh"}));
    verify_cmd->add_flag("--pin-endpoints", verify_pins, "treat ingress/egress as pinned hops");

    GenArgs gen_args;
    auto* gen = app.add_subcommand("gen", "generate a random instance");
    gen->add_option("params", gen_args.params_path, "generator params JSON")->required();
    gen->add_option("-o,--out", gen_args.out, "instance output path")->required();
    gen->add_option("--slices", gen_args.slices, "slice count");
    gen->add_option("--sfcs", gen_args.sfcs, "SFCs per slice");
    gen->add_option("--nfs", gen_args.nfs, "NFs per SFC");
    gen->add_option("--seed", gen_args.seed, "override the params seed");

    OrchestrateArgs orch_args;
    auto* orch = app.add_subcommand("orchestrate", "replay a request sequence");
    orch->add_option("sequence", orch_args.sequence_path, "request sequence JSON")->required();
    orch->add_option("--substrate", orch_args.substrate_path, "instance JSON providing the graph")
        ->required();
    orch->add_option("--mode", orch_args.mode, "replanning mode")
        ->check(CLI::IsMember({"full", "incremental"}));
    orch->add_option("--events", orch_args.events_path, "also write the event log here");
    orch->add_option("--time-limit", orch_args.time_limit, "per-solve seconds");

    ExperimentArgs exp_args;
    auto* exp = app.add_subcommand("experiment", "run a sweep preset or plan file");
    exp->add_option("plan", exp_args.plan, "VARY_SLICES|VARY_SFCS|VARY_NFS|SCALE_COMPARE or a plan file")
        ->required();
    exp->add_option("--seed", exp_args.seed, "master seed")->required();
    exp->add_option("--reps", exp_args.reps, "repetitions per point (default: plan's)");
    exp->add_option("--points", exp_args.points, "keep only the first N sweep points");
    exp->add_option("--jobs", exp_args.jobs, "parallel repetitions");
    exp->add_option("--time-limit", exp_args.time_limit, "per-instance seconds");
    exp->add_option("-o,--out", exp_args.out, "records CSV path (default: stdout)");
    exp->add_option("--plot", exp_args.plot_path, "also write the per-point plot CSV here");

    std::string stats_csv;
    auto* stats = app.add_subcommand("stats", "summarize a records CSV");
    stats->add_option("csv", stats_csv, "records CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (solve->parsed()) return run_solve(solve_args);
        if (verify_cmd->parsed()) return run_verify(verify_instance, verify_solution, verify_mode,
                                                    verify_pins);
        if (gen->parsed()) return run_gen(gen_args);
        if (orch->parsed()) return run_orchestrate(orch_args);
        if (exp->parsed()) return run_experiment_cmd(exp_args);
        if (stats->parsed()) return run_stats(stats_csv);
    } catch (const Error& e) {
        fmt::print(stderr, "error: {}: {}\n", e.code(), e.message());
        return 1;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
    return 1;
}
