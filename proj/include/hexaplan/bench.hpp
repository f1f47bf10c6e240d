#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hexaplan/pipeline.hpp"

namespace hexaplan {

/// "baseline", "2-way", "4-way", "8-way" or "auto" to a split count (0 = auto).
int heuristic_k(const std::string& name);

struct BenchConfig {
    std::vector<std::string> envs{"empty"};
    std::vector<int> robot_counts{10, 20, 30};
    std::vector<std::string> heuristics{"baseline", "2-way", "4-way", "8-way", "auto"};
    int seeds = 10;
    std::uint64_t first_seed = 0;
    double min_separation = 2.5;
    PlanConfig plan;  // k is overridden per heuristic
};

struct BenchRow {
    std::string env;
    int n = 0;
    std::string heuristic;
    std::uint64_t seed = 0;
    double runtime_s = 0.0;
    int T = 0;
    double ratio = 0.0;
    int vars = 0;
    int constraints = 0;
    std::string status;  // "ok" or an error kind
};

/// Runs every cell; failures are recorded in the status column and the sweep
/// goes on. `on_row` sees each row as it completes.
std::vector<BenchRow> run_bench(const BenchConfig& cfg, const std::function<void(const BenchRow&)>& on_row = {});

/// Solves one cell. The instance and full result are copied out when asked.
BenchRow bench_cell(const Environment& env, const std::string& env_name, int n, const std::string& heuristic,
                    std::uint64_t seed, const BenchConfig& cfg, Instance* instance = nullptr,
                    PlanResult* result = nullptr);

std::string bench_csv_header();
/// runtime_s is written as "-" when with_runtime is false, which makes reruns
/// byte-comparable.
std::string bench_csv_row(const BenchRow& row, bool with_runtime = true);

}  // namespace hexaplan
