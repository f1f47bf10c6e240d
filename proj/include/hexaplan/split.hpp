#pragma once

#include <vector>

#include "hexaplan/solver.hpp"

namespace hexaplan {

struct SplitPlan {
    int k = 1;
    std::vector<std::vector<int>> waypoints;  // [robot][cut - 1], cuts 1..k-1
    std::vector<DiscreteInstance> sub_instances;
};

/// Cuts every robot's shortest path into k pieces of near-equal hop length.
/// A waypoint already claimed at the same cut is moved to a nearby free
/// node; robots are handled in index order. k = 1 returns the instance
/// unchanged. Throws Error(split_failure) naming the robot when nothing free
/// lies within 3 hops of the desired waypoint.
SplitPlan kway_split(const DiscreteInstance& di, int k);

/// Joins consecutive plans, dropping the repeated junction steps. Throws
/// Error(internal) when the plans do not chain.
DiscretePlan concatenate(const std::vector<DiscretePlan>& plans);

/// Number of pieces that keeps each horizon near 10 steps.
int auto_k(int underestimate);
int auto_k(const DiscreteInstance& di);

struct SplitStats {
    int k_requested = 1;
    int k_used = 1;
    std::vector<DiscreteStats> sub;  // per sub-instance of the split that succeeded
    int max_sub_variables = 0;
    double seconds = 0.0;
};

/// Solves the k-way split and falls back to k - 1, ..., 1 when the split or
/// a sub-instance fails. Budget errors are not retried.
DiscretePlan solve_split(const DiscreteInstance& di, int k, const DiscreteOptions& opts = {},
                         SplitStats* stats = nullptr);

}  // namespace hexaplan
