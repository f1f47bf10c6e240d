#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hexaplan/discretize.hpp"
#include "hexaplan/geometry.hpp"
#include "hexaplan/ilp.hpp"
#include "hexaplan/lattice.hpp"
#include "hexaplan/roadmap.hpp"
#include "hexaplan/solver.hpp"
#include "hexaplan/split.hpp"

namespace hexaplan {

struct Breakpoint {
    double t = 0.0;
    Point p;
};

/// Piecewise-linear trajectories; every robot has a breakpoint at 0 and t_f.
struct ContinuousPlan {
    std::vector<std::vector<Breakpoint>> trajectories;
    double t_f = 0.0;

    std::size_t size() const noexcept { return trajectories.size(); }
    /// Position of robot i at time t (clamped to [0, t_f]).
    Point position(std::size_t i, double t) const;
};

/// Smallest distance between two piecewise-linear trajectories over their
/// common time span, computed exactly interval by interval.
double min_separation(const std::vector<Breakpoint>& a, const std::vector<Breakpoint>& b, double* at = nullptr);

struct PlanConfig {
    TilingKind tiling = TilingKind::hexagonal;
    double epsilon = 1e-3;
    Point offset{};
    int k = 0;  // pieces for the time split; 0 chooses automatically
    SolverConfig solver;
    SolveBudget budget;
    bool prune = true;
};

struct PhaseTiming {
    double cspace = 0.0;
    double roadmap = 0.0;
    double snap = 0.0;
    double solve = 0.0;
    double lift = 0.0;
    double validate = 0.0;
};

struct PlanReport {
    double t_f = 0.0;
    double lower_bound = 0.0;
    double optimality_ratio = 1.0;
    double step_duration = 0.0;
    double prefix_time = 0.0;
    double suffix_time = 0.0;
    int makespan_steps = 0;
    int lower_T = 0;
    int k_requested = 1;
    int k_used = 1;
    int variables = 0;  // largest sub-model
    int constraints = 0;
    std::size_t roadmap_nodes = 0;
    std::size_t roadmap_edges = 0;
    int bridges = 0;
    std::size_t impassable = 0;
    bool serialized_prefix = false;
    bool serialized_suffix = false;
    std::vector<std::string> warnings;
    PhaseTiming timing;

    nlohmann::json to_json(bool with_timing) const;
};

struct PlanResult {
    ContinuousPlan plan;
    PlanReport report;
    std::shared_ptr<const Roadmap> roadmap;
    DiscreteInstance discrete;
    DiscretePlan discrete_plan;
};

/// Lattice roadmap of the C-space with restored connectivity.
Roadmap build_roadmap(const CSpace& cs, const PathFinder& finder, const PlanConfig& config, double robot_radius,
                      RestoreReport* report = nullptr);

/// C-space, lattice, restoration, snapping, split solve, lifting and
/// validation in one call. Errors from every stage propagate; a plan that
/// fails validation raises Error(internal).
PlanResult plan(const Environment& env, const Instance& inst, const PlanConfig& config = {});

/// Continuous plan from a discrete plan: prefix moves, one step of length
/// side per discrete step, then suffix moves. Clashing prefixes (suffixes)
/// are delayed in robot order until they are clear.
ContinuousPlan lift(const DiscreteInstance& di, const DiscretePlan& dp, double robot_radius,
                    PlanReport* report = nullptr);

enum class ViolationKind { shape, endpoint, containment, speed, clearance };

struct Violation {
    ViolationKind kind;
    int robot = -1;
    int other = -1;
    double time = 0.0;
    double value = 0.0;
    std::string message;
};

/// Samples every trajectory on a grid of step_duration / 100 and checks that
/// each robot starts at its start and ends at its goal, stays in the C-space,
/// moves at speed <= 1 and keeps 2r from every other robot.
std::optional<Violation> validate_plan(const ContinuousPlan& plan, const Instance& inst, const CSpace& cs,
                                       double step_duration);

/// t_f over the longest single-robot shortest path; 1 when that is 0.
double optimality_ratio(const ContinuousPlan& plan, const Instance& inst, const PathFinder& finder);
double lower_bound(const Instance& inst, const PathFinder& finder);

nlohmann::json plan_to_json(const ContinuousPlan& plan, const PlanReport& report, bool with_timing = false);
/// Reads the trajectories and t_f back; the report is ignored.
ContinuousPlan plan_from_json(const nlohmann::json& doc);

}  // namespace hexaplan
