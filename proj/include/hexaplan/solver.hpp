#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hexaplan/discretize.hpp"
#include "hexaplan/ilp.hpp"

namespace hexaplan {

/// max over robots of the hop distance start -> goal. Throws
/// Error(infeasible) naming the first robot whose goal is unreachable.
int underestimate_T(const DiscreteInstance& di);

/// reach[i][t]: sorted node ids robot i may occupy at step t.
using ReachSets = std::vector<std::vector<std::vector<int>>>;

/// Nodes within t hops of the start and T - t hops of the goal.
ReachSets reachable_sets(const DiscreteInstance& di, int T);

/// No pruning: start at t = 0, goal at t = T, the start's whole component in
/// between.
ReachSets full_sets(const DiscreteInstance& di, int T);

/// Robot moves u -> v between steps t and t + 1; u == v is a wait.
struct Arc {
    int robot = -1;
    int u = -1;
    int v = -1;
    int t = 0;
    int edge = -1;  // roadmap edge, -1 for waits

    friend bool operator==(const Arc&, const Arc&) = default;
};

struct TimeExpansion {
    int T = 0;
    ReachSets reach;
    std::vector<Arc> arcs;  // sorted by (robot, t, u, v)
};

/// Move and wait arcs between consecutive layers, restricted to `reach`.
/// nullopt when some robot has an empty layer (no plan at this T).
std::optional<TimeExpansion> time_expand(const DiscreteInstance& di, int T, const ReachSets& reach);

/// One binary variable per arc, in arc order.
IlpModel build_ilp(const TimeExpansion& tx, const DiscreteInstance& di);

struct DiscretePlan {
    std::vector<std::vector<int>> paths;  // per robot, makespan_steps + 1 nodes
    int makespan_steps = 0;
};

/// Independent of the solver: endpoint, adjacency, vertex, swap and bridge
/// exclusion checks. Returns a description of the first violation.
std::optional<std::string> check_discrete_plan(const DiscretePlan& plan, const DiscreteInstance& di);

struct DiscreteOptions {
    SolverConfig solver;
    SolveBudget budget;
    bool prune = true;
    int max_T = -1;  // -1: 4 * underestimate + 3 * n
};

struct DiscreteStats {
    int lower_T = 0;
    int attempts = 0;
    int variables = 0;    // of the final model
    int constraints = 0;
    long long decisions = 0;
    long long conflicts = 0;
    double seconds = 0.0;
};

/// Tries T = underestimate, underestimate + 1, ... until the model is
/// feasible. Throws Error(timeout) past max_T and Error(budget) when the
/// solver gives up.
DiscretePlan solve_discrete(const DiscreteInstance& di, const DiscreteOptions& opts = {},
                            DiscreteStats* stats = nullptr);

}  // namespace hexaplan
