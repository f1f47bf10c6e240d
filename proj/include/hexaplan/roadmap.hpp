#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "hexaplan/geometry.hpp"
#include "hexaplan/lattice.hpp"

namespace hexaplan {

enum class EdgeKind : std::uint8_t { lattice, bridge };

const char* to_string(EdgeKind kind);

struct RoadmapEdge {
    int a = -1;
    int b = -1;
    EdgeKind kind = EdgeKind::lattice;
    double length = 0.0;
    int group = -1;           // bridge exclusivity group, -1 for lattice edges
    std::vector<Point> via;   // interior polyline corners from a to b (bridges only)

    /// Full polyline a -> b given the roadmap's node table.
    std::vector<Point> polyline(const std::vector<Point>& nodes) const;
};

/// One restored passage: a chain of bridge edges added as a unit.
struct BridgeGroup {
    int id = -1;
    std::vector<int> nodes;     // chain order, endpoints included
    std::vector<int> edges;
    std::vector<Point> polyline;
    std::array<int, 2> obstacles{-1, -1};  // obstacle pair that called for it
};

struct Roadmap {
    double side = 0.0;
    std::vector<Point> nodes;
    std::vector<int> lattice_node;  // lattice id per node, -1 for bridge interior nodes
    std::vector<RoadmapEdge> edges;
    std::vector<std::vector<std::pair<int, int>>> adjacency;  // (neighbour, edge id)
    std::vector<std::vector<int>> faces;  // node rings of cells whose edges are all free
    std::vector<BridgeGroup> groups;

    std::size_t node_count() const noexcept { return nodes.size(); }
    bool is_lattice_node(int v) const { return lattice_node[static_cast<std::size_t>(v)] >= 0; }
    /// Edge id joining u and v, or -1.
    int find_edge(int u, int v) const;

    /// Component label per node, labels dense from 0 in node order.
    std::vector<int> components() const;
    std::size_t component_count() const;

    /// Hop counts from src (-1 where unreachable).
    std::vector<int> hops_from(int src) const;
    /// Geometric edge-length distances from src (infinity where unreachable).
    std::vector<double> distances_from(int src) const;
    /// Same, from several sources with initial offsets.
    std::vector<double> distances_from(const std::vector<std::pair<int, double>>& sources) const;

    void rebuild_adjacency();
};

/// Roadmap of the free lattice edges; nodes without a free edge are dropped.
Roadmap roadmap_from_lattice(const Lattice& lat);

/// Plain graph roadmap (every node counts as a lattice node). Used for
/// abstract discrete instances. Throws Error(input) on bad or repeated edges.
Roadmap roadmap_from_graph(std::vector<Point> nodes, const std::vector<std::array<int, 2>>& edges,
                           double side);

/// Shortest a -> b route that walks straight to a node within `reach`,
/// follows roadmap edges and walks straight from a node within `reach` to b.
/// Infinity when no such route exists.
double roadmap_path_length(const Roadmap& rm, const CSpace& cs, Point a, Point b, double reach);

struct EnclosingCycle {
    std::vector<int> nodes;  // lattice node ids, counter-clockwise
    std::vector<int> cells;  // cells covered by the obstacle (sorted)
    bool open_boundary = false;
};

/// Outer boundary of the union of cells that meet `obstacle`. When the cycle
/// would need an edge that leaves the C-space (or the patch), open_boundary is
/// set and the nodes are still returned for inspection.
EnclosingCycle enclosing_cycle(const Lattice& lat, const Ring& obstacle);

struct ImpassablePassage {
    int obstacle_a = -1;
    int obstacle_b = -1;
};

struct RestoreReport {
    int bridges_added = 0;
    int bridge_nodes_added = 0;
    std::vector<ImpassablePassage> impassable;
};

/// Adds visibility-graph bridges wherever neighbouring obstacles pinch the
/// lattice, then joins any remaining split components of one C-space region.
/// Obstacles are numbered region by region: outer ring first, then holes.
Roadmap restore_connectivity(const Roadmap& rm, const Lattice& lat, const CSpace& cs,
                             const PathFinder& finder, RestoreReport* report = nullptr);

struct TopologyReport {
    std::size_t roadmap_components = 0;
    std::size_t cspace_components = 0;
    long roadmap_holes = 0;
    std::size_t cspace_holes = 0;
    bool components_match = false;
    bool holes_match = false;
};

/// Components and independent cycles after contracting free cells.
TopologyReport verify_topology(const Roadmap& rm, const CSpace& cs);

/// Motion primitives that must not run in the same step as a robot on a
/// bridge group. A primitive is a wait at a node or a move along an edge
/// (either direction).
struct ExclusionZone {
    int group = -1;
    std::vector<int> bridge_edges;    // the group's own edges
    std::vector<int> interior_nodes;  // waits inside the group
    std::vector<int> near_nodes;      // other waits within 2r of the group's path
    std::vector<int> near_edges;      // other edges within 2r of the group's path
};

std::vector<ExclusionZone> exclusion_zones(const Roadmap& rm, double robot_radius);

nlohmann::json roadmap_to_json(const Roadmap& rm);

}  // namespace hexaplan
