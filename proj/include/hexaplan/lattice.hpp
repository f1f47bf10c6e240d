#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hexaplan/geometry.hpp"

namespace hexaplan {

enum class TilingKind { hexagonal, square, triangular };

const char* to_string(TilingKind kind);
TilingKind tiling_kind_from_string(const std::string& name);

/// Shortest lattice side at which two disc robots moving concurrently at unit
/// speed on edges sharing a node never overlap: 4r/sqrt(3) (hexagonal),
/// 4r/sqrt(2) (square), 4r (triangular).
double min_safe_side(TilingKind kind, double robot_radius = 1.0);

/// Fraction of the plane covered by robots when every node of the tiling is
/// occupied at the minimum safe side. Independent of the robot radius.
double tiling_density(TilingKind kind);

struct TilingSpec {
    TilingKind kind = TilingKind::hexagonal;
    double side = 0.0;
    double epsilon = 1e-3;

    /// side = min_safe_side(kind, radius) * (1 + epsilon).
    static TilingSpec minimal(TilingKind kind, double robot_radius = 1.0, double epsilon = 1e-3);
    /// Throws Error(input) when epsilon <= 0 or side is below the safe minimum.
    void validate(double robot_radius) const;
};

enum class EdgeState : std::uint8_t {
    free,      // segment lies in the C-space
    crossing,  // segment meets the C-space boundary
    outside,   // segment lies outside the C-space
};

/// A finite patch of a regular tiling with cell/edge incidence, plus the
/// classification of every edge against a C-space.
struct Lattice {
    TilingSpec spec;
    Point origin;  // lattice reference point (see overlay_lattice)

    std::vector<Point> nodes;
    std::vector<std::array<int, 2>> edges;
    std::vector<std::vector<int>> cells;       // counter-clockwise node rings
    std::vector<std::vector<int>> cell_edges;  // cell_edges[c][i] joins cells[c][i], cells[c][i+1]
    std::vector<std::array<int, 2>> edge_cells;  // -1 on the patch border
    std::vector<std::vector<int>> node_edges;
    std::vector<EdgeState> state;

    bool is_free(int e) const { return state[static_cast<std::size_t>(e)] == EdgeState::free; }
    std::vector<bool> free_mask() const;
    std::size_t free_edge_count() const;

    /// Cell containing p (closed, lowest index on ties), or -1.
    int locate_cell(Point p) const;
    bool cell_contains(int cell, Point p, double tol = kGeomTol) const;
    Point cell_center(int cell) const;
    int neighbor_across(int cell, int edge) const;
    bool is_border_cell(int cell) const;

    // Uniform bucket grid over cell bounding boxes for locate_cell.
    Point bucket_origin;
    double bucket_size = 1.0;
    int bucket_cols = 0;
    int bucket_rows = 0;
    std::vector<std::vector<int>> buckets;
};

/// Unclassified patch covering `region` with a two-cell margin. The lattice is
/// placed so that `origin` sits at offset (side/4, side/4) from the centre of
/// cell 0, which keeps node/edge lines off axis-aligned lines through origin.
/// One hexagon edge is vertical. All edges start in EdgeState::outside.
Lattice overlay_lattice(const TilingSpec& spec, Bbox region, Point origin);

/// Overlays spec's lattice at the C-space's bounding-box lower-left corner
/// (plus `offset`) and classifies every edge via boundary_walk and
/// classify_by_bfs. Throws Error(empty_lattice) when no edge is free.
Lattice impose_lattice(const CSpace& cs, const TilingSpec& spec, Point offset = {});

/// Lattice edges meeting any C-space boundary ring, found by locating the cell
/// that holds one ring vertex and tracing the ring cell by cell. Sorted ids.
std::vector<int> boundary_walk(const CSpace& cs, const Lattice& lat);

/// Cells visited while tracing `ring` (each cell whose closure meets it) and
/// the crossing edges found. Both sorted.
struct RingTrace {
    std::vector<int> cells;
    std::vector<int> edges;
};
RingTrace trace_ring(const Lattice& lat, const Ring& ring);

/// Endpoints of crossing edges that lie in the C-space; BFS starting points.
std::vector<int> interior_seeds(const CSpace& cs, const Lattice& lat, std::span<const int> crossing);

/// Marks every edge reachable from the seeds without using a crossing edge.
/// Purely combinatorial. Throws Error(empty_lattice) when seeds is empty.
std::vector<bool> classify_by_bfs(const Lattice& lat, std::span<const int> crossing,
                                  std::span<const int> seeds);

nlohmann::json lattice_to_json(const Lattice& lat);

}  // namespace hexaplan
