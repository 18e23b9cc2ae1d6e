#include "chainplace/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

namespace chainplace {

namespace {

double parse_double(const std::string& field, std::size_t line_no) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(field, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != field.size())
        throw Error("ParseError", fmt::format("line {}: bad number '{}'", line_no, field));
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

constexpr char kCsvHeader[] = "preset,slices,sfcs,nfs,nodes,seed,active_nodes,solve_time_s,status";

}  // namespace

Swept swept_for(const std::string& preset_name) {
    if (preset_name == "VARY_SFCS") return Swept::Sfcs;
    if (preset_name == "VARY_NFS") return Swept::Nfs;
    return Swept::Slices;  // VARY_SLICES, SCALE_COMPARE, custom plans
}

double swept_value(const ExperimentRecord& r, Swept swept) {
    switch (swept) {
        case Swept::Slices: return r.slices;
        case Swept::Sfcs: return r.sfcs;
        case Swept::Nfs: return r.nfs;
    }
    return r.slices;
}

Regression ols(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size())
        throw Error("RegressionUndefined", "x and y lengths differ");
    if (x.empty()) throw Error("RegressionUndefined", "no samples");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0)
        throw Error("RegressionUndefined", "all x values coincide");
    Regression r;
    r.alpha = sxy / sxx;
    r.beta = my - r.alpha * mx;
    return r;
}

MeanCi mean_ci(const std::vector<double>& values) {
    MeanCi m;
    m.count = values.size();
    if (values.empty()) return m;
    double sum = 0;
    for (double v : values) sum += v;
    m.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0;
        for (double v : values) ss += (v - m.mean) * (v - m.mean);
        m.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
        m.ci_half_width = 1.96 * m.stddev / std::sqrt(static_cast<double>(values.size()));
    }
    return m;
}

AggregateStats aggregate(const std::vector<ExperimentRecord>& records, Swept swept) {
    if (records.empty()) throw Error("RegressionUndefined", "no records to aggregate");
    AggregateStats stats;
    std::vector<double> active, times, xs;
    for (const auto& r : records) {
        active.push_back(r.active_nodes);
        times.push_back(r.solve_time_s);
        xs.push_back(swept_value(r, swept));
    }
    stats.active = mean_ci(active);
    try {
        stats.time_on_swept = ols(xs, times);
    } catch (const Error&) {
    }
    try {
        stats.time_on_active = ols(active, times);
    } catch (const Error&) {
    }
    return stats;
}

ExperimentResult run_experiment(const ExperimentPlan& plan, std::uint64_t master_seed,
                                int parallelism, const SolverLimits& limits,
                                const BuildConfig& config) {
    if (parallelism < 1) throw Error("InvalidLimits", "parallelism must be at least 1");
    if (plan.repetitions < 1) throw Error("InvalidLimits", "repetitions must be at least 1");
    ExperimentResult result;
    result.plan = plan;
    const std::size_t reps = static_cast<std::size_t>(plan.repetitions);
    const std::size_t total = plan.points.size() * reps;
    result.records.resize(total);

    std::atomic<std::size_t> next{0};
    const auto worker = [&]() {
        while (true) {
            const std::size_t task = next.fetch_add(1);
            if (task >= total) return;
            const std::size_t point_idx = task / reps;
            const std::size_t rep = task % reps;
            const auto& pt = result.plan.points[point_idx];

            GenParams params = result.plan.base;
            params.n_hosts = pt.hosts;
            params.seed = Rng::derive(master_seed,
                                      (static_cast<std::uint64_t>(point_idx) << 32) | rep);

            ExperimentRecord rec;
            rec.preset = result.plan.name;
            rec.slices = pt.slices;
            rec.sfcs = pt.sfcs;
            rec.nfs = pt.nfs;
            rec.nodes = pt.hosts;
            rec.seed = params.seed;

            const auto substrate = gen_substrate(params);
            const auto requests = gen_requests(pt.slices, pt.sfcs, pt.nfs, params);
            const auto t0 = std::chrono::steady_clock::now();
            const auto solution = solve_exact(substrate, requests, config, limits);
            rec.solve_time_s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            rec.status = solution.status;
            rec.active_nodes = static_cast<int>(solution.active_nodes.size());
            result.records[task] = std::move(rec);
        }
    };

    if (parallelism == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < parallelism; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    const auto swept = swept_for(plan.name);
    for (std::size_t p = 0; p < plan.points.size(); ++p) {
        std::vector<ExperimentRecord> slice(result.records.begin() + p * reps,
                                            result.records.begin() + (p + 1) * reps);
        result.per_point.push_back(aggregate(slice, swept));
    }
    return result;
}

std::string records_to_csv(const std::vector<ExperimentRecord>& records) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const auto& r : records)
        out += fmt::format("{},{},{},{},{},{},{},{},{}\n", r.preset, r.slices, r.sfcs, r.nfs,
                           r.nodes, r.seed, r.active_nodes, r.solve_time_s, to_string(r.status));
    return out;
}

std::vector<ExperimentRecord> records_from_csv(const std::string& text) {
    std::vector<ExperimentRecord> out;
    std::size_t start = 0, line_no = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        start = end + 1;
        ++line_no;
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != kCsvHeader)
                throw Error("ParseError", fmt::format("unexpected header '{}'", line));
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() != 9)
            throw Error("ParseError",
                        fmt::format("line {}: expected 9 fields, got {}", line_no, f.size()));
        ExperimentRecord r;
        r.preset = f[0];
        r.slices = static_cast<int>(parse_double(f[1], line_no));
        r.sfcs = static_cast<int>(parse_double(f[2], line_no));
        r.nfs = static_cast<int>(parse_double(f[3], line_no));
        r.nodes = static_cast<int>(parse_double(f[4], line_no));
        try {
            r.seed = std::stoull(f[5]);
        } catch (const std::exception&) {
            throw Error("ParseError", fmt::format("line {}: bad seed '{}'", line_no, f[5]));
        }
        r.active_nodes = static_cast<int>(parse_double(f[6], line_no));
        r.solve_time_s = parse_double(f[7], line_no);
        r.status = solve_status_from_string(f[8]);
        out.push_back(std::move(r));
    }
    return out;
}

std::string plot_csv(const std::vector<ExperimentRecord>& records, Swept swept) {
    std::map<std::pair<double, int>, std::pair<std::vector<double>, std::vector<double>>> groups;
    for (const auto& r : records) {
        auto& [active, times] = groups[{swept_value(r, swept), r.nodes}];
        active.push_back(r.active_nodes);
        times.push_back(r.solve_time_s);
    }
    std::string out = "x,mean,ci,time_mean,time_ci\n";
    for (const auto& [key, series] : groups) {
        const auto a = mean_ci(series.first);
        const auto t = mean_ci(series.second);
        out += fmt::format("{},{},{},{},{}\n", key.first, a.mean, a.ci_half_width, t.mean,
                           t.ci_half_width);
    }
    return out;
}

ExperimentPlan plan_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error("ParseError", e.what());
    }
    ExperimentPlan plan;
    try {
        plan.name = j.at("name").get<std::string>();
        if (j.contains("repetitions")) plan.repetitions = j.at("repetitions").get<int>();
        if (j.contains("base")) plan.base = gen_params_from_json_text(j.at("base").dump());
        for (const auto& p : j.at("points")) {
            ConfigPoint pt;
            pt.slices = p.at("slices").get<int>();
            pt.sfcs = p.at("sfcs").get<int>();
            pt.nfs = p.at("nfs").get<int>();
            if (p.contains("hosts")) pt.hosts = p.at("hosts").get<int>();
            plan.points.push_back(pt);
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error("ParseError", e.what());
    }
    if (plan.points.empty()) throw Error("ParseError", "plan has no points");
    return plan;
}

std::string plan_to_json_text(const ExperimentPlan& plan) {
    nlohmann::json j;
    j["name"] = plan.name;
    j["repetitions"] = plan.repetitions;
    j["base"] = nlohmann::json::parse(gen_params_to_json_text(plan.base));
    auto& points = j["points"] = nlohmann::json::array();
    for (const auto& p : plan.points)
        points.push_back({{"slices", p.slices},
                          {"sfcs", p.sfcs},
                          {"nfs", p.nfs},
                          {"hosts", p.hosts}});
    return j.dump(2) + "\n";
}

std::string plot_csv(const ExperimentResult& result) {
    const auto swept = swept_for(result.plan.name);
    std::string out = "x,mean,ci,time_mean,time_ci\n";
    const std::size_t reps = static_cast<std::size_t>(result.plan.repetitions);
    for (std::size_t p = 0; p < result.plan.points.size(); ++p) {
        std::vector<double> times;
        for (std::size_t rep = 0; rep < reps; ++rep)
            times.push_back(result.records[p * reps + rep].solve_time_s);
        const auto t = mean_ci(times);
        ExperimentRecord probe;
        probe.slices = result.plan.points[p].slices;
        probe.sfcs = result.plan.points[p].sfcs;
        probe.nfs = result.plan.points[p].nfs;
        const auto& a = result.per_point[p].active;
        out += fmt::format("{},{},{},{},{}\n", swept_value(probe, swept), a.mean,
                           a.ci_half_width, t.mean, t.ci_half_width);
    }
    return out;
}

}  // namespace chainplace
