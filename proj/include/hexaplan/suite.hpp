#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hexaplan/discretize.hpp"
#include "hexaplan/geometry.hpp"

namespace hexaplan {

/// Names of the bundled 35 x 35 environments.
std::vector<std::string> suite_names();

/// Throws Error(input) for unknown names.
Environment suite_environment(const std::string& name, double robot_radius = 1.0);

/// Rejection-sampled starts and goals in the C-space, each set pairwise
/// at least min_separation * r apart, every goal in its start's region.
/// Throws Error(input) after 100000 consecutive rejections.
Instance gen_instance(const Environment& env, int n, double min_separation, std::uint64_t seed);
Instance gen_instance(const CSpace& cs, int n, double min_separation, std::uint64_t seed);

}  // namespace hexaplan
