#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hexaplan/geometry.hpp"
#include "hexaplan/roadmap.hpp"

namespace hexaplan {

struct Instance {
    std::vector<Point> starts;
    std::vector<Point> goals;

    std::size_t size() const noexcept { return starts.size(); }
    nlohmann::json to_json() const;
};

/// Throws Error(input) on malformed documents or mismatched counts.
Instance instance_from_json(const nlohmann::json& doc);
Instance load_instance(const std::string& path);

enum class WarningKind { start_separation, goal_separation, boundary_clearance };

struct AssumptionWarning {
    WarningKind kind;
    int robot = -1;
    int other = -1;  // second robot for separation warnings
    bool goal = false;
    double value = 0.0;
    std::string message;
};

struct AssumptionOptions {
    double min_separation = 2.5;  // in robot radii
    bool check_clearance = true;  // sqrt(5) r disc around every start and goal
};

/// Advisory checks only; never throws for violations.
std::vector<AssumptionWarning> validate_assumptions(const Instance& inst, const Environment& env,
                                                    const AssumptionOptions& opts = {});

/// Straight move between a continuous endpoint and its roadmap node.
struct SnapSegment {
    Point point;
    int node = -1;
};

struct DiscreteInstance {
    const Roadmap* roadmap = nullptr;
    double robot_radius = 1.0;
    std::vector<int> start_node;
    std::vector<int> goal_node;
    std::vector<SnapSegment> prefix;  // start point -> start node
    std::vector<SnapSegment> suffix;  // goal node -> goal point

    std::size_t size() const noexcept { return start_node.size(); }
};

/// Bare discrete instance on a roadmap without continuous endpoints.
DiscreteInstance make_discrete(const Roadmap& rm, std::vector<int> starts, std::vector<int> goals,
                               double robot_radius = 1.0);

/// Greedy snapping of starts, then goals. Throws Error(snap_failure) naming
/// the robot when no admissible node lies within 2 * side, and Error(input)
/// when an endpoint is outside the C-space.
DiscreteInstance snap(const Instance& inst, const Roadmap& rm, const CSpace& cs);

}  // namespace hexaplan
