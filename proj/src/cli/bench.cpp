#include <chrono>
#include <cstdio>

#include "hexaplan/bench.hpp"
#include "hexaplan/error.hpp"
#include "hexaplan/suite.hpp"

namespace hexaplan {

int heuristic_k(const std::string& name) {
    if (name == "baseline") return 1;
    if (name == "auto") return 0;
    const auto dash = name.find("-way");
    if (dash != std::string::npos && dash > 0 && dash + 4 == name.size()) {
        try {
            const int k = std::stoi(name.substr(0, dash));
            if (k >= 1) return k;
        } catch (const std::exception&) {
        }
    }
    throw Error(ErrorKind::input, "unknown heuristic '" + name + "'");
}

BenchRow bench_cell(const Environment& env, const std::string& env_name, int n, const std::string& heuristic,
                    std::uint64_t seed, const BenchConfig& cfg, Instance* instance, PlanResult* result) {
    BenchRow row;
    row.env = env_name;
    row.n = n;
    row.heuristic = heuristic;
    row.seed = seed;
    PlanConfig pc = cfg.plan;
    pc.k = heuristic_k(heuristic);
    pc.budget.seed = seed;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const Instance inst = gen_instance(env, n, cfg.min_separation, seed);
        if (instance) *instance = inst;
        PlanResult res = plan(env, inst, pc);
        row.T = res.report.makespan_steps;
        row.ratio = res.report.optimality_ratio;
        row.vars = res.report.variables;
        row.constraints = res.report.constraints;
        row.status = "ok";
        if (result) *result = std::move(res);
    } catch (const Error& e) {
        row.status = to_string(e.kind());
    }
    row.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

std::vector<BenchRow> run_bench(const BenchConfig& cfg, const std::function<void(const BenchRow&)>& on_row) {
    std::vector<BenchRow> rows;
    for (const auto& name : cfg.envs) {
        const Environment env = suite_environment(name, 1.0);
        for (int n : cfg.robot_counts)
            for (const auto& h : cfg.heuristics)
                for (int s = 0; s < cfg.seeds; ++s) {
                    rows.push_back(bench_cell(env, name, n, h, cfg.first_seed + static_cast<std::uint64_t>(s), cfg));
                    if (on_row) on_row(rows.back());
                }
    }
    return rows;
}

std::string bench_csv_header() { return "env,n,heuristic,seed,runtime_s,T,ratio,vars,constraints,status"; }

std::string bench_csv_row(const BenchRow& row, bool with_runtime) {
    char runtime[32] = "-";
    if (with_runtime) std::snprintf(runtime, sizeof runtime, "%.4f", row.runtime_s);
    char ratio[32] = "";
    if (row.status == "ok") std::snprintf(ratio, sizeof ratio, "%.6f", row.ratio);
    return row.env + "," + std::to_string(row.n) + "," + row.heuristic + "," + std::to_string(row.seed) + "," +
           runtime + "," + (row.status == "ok" ? std::to_string(row.T) : "") + "," + ratio + "," +
           std::to_string(row.vars) + "," + std::to_string(row.constraints) + "," + row.status;
}

}  // namespace hexaplan
