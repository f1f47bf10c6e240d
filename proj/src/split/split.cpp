#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <tuple>

#include "hexaplan/error.hpp"
#include "hexaplan/split.hpp"

namespace hexaplan {

namespace {

constexpr int kRelocateHops = 3;
constexpr int kStepsPerPiece = 10;

std::size_t idx(int v) { return static_cast<std::size_t>(v); }

// Lazily filled hop tables, one BFS per source node.
class HopCache {
public:
    explicit HopCache(const Roadmap& rm) : rm_(rm), table_(rm.node_count()) {}
    int operator()(int a, int b) {
        auto& row = table_[idx(a)];
        if (row.empty()) row = rm_.hops_from(a);
        return row[idx(b)];
    }

private:
    const Roadmap& rm_;
    std::vector<std::vector<int>> table_;
};

// Node `step` hops from prev on a shortest prev -> goal path, closest to the
// matching point of the straight line between them.
int desired_node(const Roadmap& rm, HopCache& hop, int prev, int goal, int step) {
    const int len = hop(prev, goal);
    if (len <= 0 || step <= 0) return prev;
    if (step >= len) return goal;
    const Point target = lerp(rm.nodes[idx(prev)], rm.nodes[idx(goal)], static_cast<double>(step) / len);
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int v = 0; v < static_cast<int>(rm.node_count()); ++v) {
        if (hop(prev, v) != step || hop(goal, v) != len - step) continue;
        const double d = distance(rm.nodes[idx(v)], target);
        if (d < best_d - 1e-12) {
            best = v;
            best_d = d;
        }
    }
    return best;
}

}  // namespace

SplitPlan kway_split(const DiscreteInstance& di, int k) {
    if (k < 1) throw Error(ErrorKind::input, "split count must be at least 1");
    if (!di.roadmap) throw Error(ErrorKind::internal, "discrete instance without a roadmap");
    const Roadmap& rm = *di.roadmap;
    SplitPlan sp;
    sp.k = k;
    sp.waypoints.assign(di.size(), {});
    if (k == 1) {
        sp.sub_instances.push_back(di);
        return sp;
    }
    const int limit = underestimate_T(di);
    HopCache hop(rm);
    std::vector<int> prev = di.start_node;
    std::vector<int> len(di.size());
    for (std::size_t i = 0; i < di.size(); ++i) len[i] = hop(di.start_node[i], di.goal_node[i]);

    for (int j = 1; j < k; ++j) {
        std::set<int> claimed;
        for (std::size_t i = 0; i < di.size(); ++i) {
            const int goal = di.goal_node[i];
            const int step = static_cast<int>(static_cast<long long>(j) * len[i] / k) -
                             static_cast<int>(static_cast<long long>(j - 1) * len[i] / k);
            const int want = desired_node(rm, hop, prev[i], goal, std::min(step, hop(prev[i], goal)));
            int pick = want;
            if (claimed.count(want)) {
                // Free node near the desired one, preferring no detour, then
                // an even split of the remaining hops, then proximity.
                const int base_prev = hop(prev[i], want), base_goal = hop(goal, want);
                std::tuple<int, int, int, int> best{std::numeric_limits<int>::max(), 0, 0, 0};
                pick = -1;
                for (int w = 0; w < static_cast<int>(rm.node_count()); ++w) {
                    const int h = hop(want, w);
                    if (h < 0 || h > kRelocateHops || claimed.count(w)) continue;
                    const int a = hop(prev[i], w), b = hop(goal, w);
                    if (a > limit || b > limit) continue;
                    const std::tuple<int, int, int, int> key{a + b - base_prev - base_goal, std::abs(a - base_prev), h, w};
                    if (key < best) {
                        best = key;
                        pick = w;
                    }
                }
                if (pick < 0)
                    throw Error(ErrorKind::split_failure,
                                "robot " + std::to_string(i) + ": no free waypoint near node " + std::to_string(want) +
                                    " at cut " + std::to_string(j),
                                static_cast<int>(i));
            }
            claimed.insert(pick);
            sp.waypoints[i].push_back(pick);
            prev[i] = pick;
        }
    }

    for (int j = 0; j < k; ++j) {
        DiscreteInstance sub;
        sub.roadmap = di.roadmap;
        sub.robot_radius = di.robot_radius;
        for (std::size_t i = 0; i < di.size(); ++i) {
            sub.start_node.push_back(j == 0 ? di.start_node[i] : sp.waypoints[i][idx(j - 1)]);
            sub.goal_node.push_back(j == k - 1 ? di.goal_node[i] : sp.waypoints[i][idx(j)]);
        }
        if (j == 0) sub.prefix = di.prefix;
        if (j == k - 1) sub.suffix = di.suffix;
        sp.sub_instances.push_back(std::move(sub));
    }
    return sp;
}

DiscretePlan concatenate(const std::vector<DiscretePlan>& plans) {
    if (plans.empty()) throw Error(ErrorKind::internal, "nothing to concatenate");
    DiscretePlan out = plans.front();
    for (std::size_t j = 1; j < plans.size(); ++j) {
        const DiscretePlan& next = plans[j];
        if (next.paths.size() != out.paths.size())
            throw Error(ErrorKind::internal, "sub-plan " + std::to_string(j) + " has a different robot count");
        for (std::size_t i = 0; i < out.paths.size(); ++i) {
            if (next.paths[i].empty() || out.paths[i].back() != next.paths[i].front())
                throw Error(ErrorKind::internal, "sub-plan " + std::to_string(j) + " does not continue robot " +
                                                     std::to_string(i));
            out.paths[i].insert(out.paths[i].end(), next.paths[i].begin() + 1, next.paths[i].end());
        }
        out.makespan_steps += next.makespan_steps;
    }
    return out;
}

int auto_k(int underestimate) { return std::max(1, (underestimate + kStepsPerPiece - 1) / kStepsPerPiece); }

int auto_k(const DiscreteInstance& di) { return auto_k(underestimate_T(di)); }

DiscretePlan solve_split(const DiscreteInstance& di, int k, const DiscreteOptions& opts, SplitStats* stats) {
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
    SplitStats local;
    SplitStats& st = stats ? *stats : local;
    st = {};
    st.k_requested = k;
    for (int kk = std::max(1, k); kk >= 1; --kk) {
        try {
            const SplitPlan sp = kway_split(di, kk);
            std::vector<DiscretePlan> parts;
            std::vector<DiscreteStats> sub_stats;
            for (const DiscreteInstance& sub : sp.sub_instances) {
                DiscreteOptions o = opts;
                o.budget.max_seconds = opts.budget.max_seconds - elapsed();
                if (o.budget.max_seconds <= 0.0) throw Error(ErrorKind::budget, "solver time budget exhausted");
                DiscreteStats s;
                parts.push_back(solve_discrete(sub, o, &s));
                sub_stats.push_back(s);
            }
            DiscretePlan plan = concatenate(parts);
            if (auto bad = check_discrete_plan(plan, di))
                throw Error(ErrorKind::internal, "concatenated plan is invalid: " + *bad);
            st.k_used = kk;
            st.sub = std::move(sub_stats);
            st.max_sub_variables = 0;
            for (const auto& s : st.sub) st.max_sub_variables = std::max(st.max_sub_variables, s.variables);
            st.seconds = elapsed();
            return plan;
        } catch (const Error& e) {
            const bool retry = e.kind() == ErrorKind::split_failure || e.kind() == ErrorKind::timeout ||
                               (e.kind() == ErrorKind::infeasible && kk > 1);
            if (!retry || kk == 1) throw;
        }
    }
    throw Error(ErrorKind::internal, "unreachable");
}

}  // namespace hexaplan
