#pragma once

#include <string>

#include "hexaplan/discretize.hpp"
#include "hexaplan/geometry.hpp"
#include "hexaplan/pipeline.hpp"
#include "hexaplan/roadmap.hpp"

namespace hexaplan {

struct RenderInput {
    const Environment* env = nullptr;   // required
    const CSpace* cspace = nullptr;
    const Roadmap* roadmap = nullptr;
    const Instance* instance = nullptr;
    const ContinuousPlan* plan = nullptr;
    double scale = 20.0;  // pixels per workspace unit
};

/// SVG 1.1 document with obstacles, C-space boundary, roadmap (bridges drawn
/// apart from lattice edges), numbered start and goal discs, and one
/// polyline per trajectory. Output is stable for identical input.
std::string render_svg(const RenderInput& in);

}  // namespace hexaplan
