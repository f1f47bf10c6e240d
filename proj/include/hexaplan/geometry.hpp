#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hexaplan/kernels.hpp"

namespace hexaplan {

/// Absolute tolerance (workspace units) for orientation, intersection and
/// containment predicates.
inline constexpr double kGeomTol = 1e-9;

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
    friend Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
    friend bool operator==(Point a, Point b) = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(b - a); }
inline Point lerp(Point a, Point b, double t) { return a + t * (b - a); }

/// Vertex loop without a repeated closing vertex.
using Ring = std::vector<Point>;

struct PolygonWithHoles {
    Ring outer;               // counter-clockwise
    std::vector<Ring> holes;  // clockwise
};

struct Bbox {
    Point lo{};
    Point hi{};
    double width() const { return hi.x - lo.x; }
    double height() const { return hi.y - lo.y; }
};

Bbox bbox_of(const Ring& ring);

/// Positive for counter-clockwise rings.
double signed_area(const Ring& ring);

/// No two non-adjacent edges touch and adjacent edges meet only at their
/// shared vertex.
bool is_simple(const Ring& ring);

double point_segment_distance(Point p, Point a, Point b);
double segment_segment_distance(Point a, Point b, Point c, Point d);

/// Closed-segment intersection test with tolerance `tol`.
bool segments_intersect(Point a, Point b, Point c, Point d, double tol = kGeomTol);

/// -1 outside, 0 within `tol` of the boundary, +1 inside.
int classify_point(const Ring& ring, Point p, double tol = kGeomTol);

/// Polygonal workspace: outer boundary with obstacle holes.
struct Environment {
    Ring outer;               // counter-clockwise after normalization
    std::vector<Ring> holes;  // clockwise after normalization
    double robot_radius = 1.0;

    /// Total edge count m.
    std::size_t complexity() const;
    Bbox bbox() const;
    bool in_workspace(Point p) const;
    /// Distance to the nearest obstacle edge, negated outside the workspace.
    double clearance(Point p) const;

    nlohmann::json to_json() const;
};

/// Validates and orientation-normalizes the polygons. Throws
/// Error(ErrorKind::input) with a diagnostic on degenerate or non-simple input.
Environment make_environment(Ring outer, std::vector<Ring> holes, double robot_radius = 1.0);
Environment environment_from_json(const nlohmann::json& doc);
Environment load_environment(const std::string& path);

/// Free configuration space of one disc robot: a set of disjoint polygonal
/// regions with holes. Immutable once built.
class CSpace {
public:
    CSpace() = default;
    CSpace(std::vector<PolygonWithHoles> regions, double robot_radius);

    const std::vector<PolygonWithHoles>& regions() const noexcept { return regions_; }
    double robot_radius() const noexcept { return robot_radius_; }
    bool empty() const noexcept { return regions_.empty(); }
    std::size_t component_count() const noexcept { return regions_.size(); }
    std::size_t hole_count() const;
    std::size_t vertex_count() const;
    Bbox bbox() const { return bbox_; }

    /// Every ring edge of every region, for batched distance queries.
    const kernels::SegmentSoA& boundary() const noexcept { return boundary_; }
    double boundary_distance(Point p) const;

    /// Region index containing p (closed), or -1.
    int region_of(Point p) const;

private:
    std::vector<PolygonWithHoles> regions_;
    double robot_radius_ = 0.0;
    Bbox bbox_{};
    kernels::SegmentSoA boundary_;
};

/// Points at distance >= radius from every obstacle edge. Arcs around convex
/// corners are replaced by circumscribed 8-gon pieces, so the result never
/// contains a point closer than `radius` to an obstacle.
CSpace compute_cspace(const Environment& env, double radius);

/// Closed-set membership with kGeomTol slack.
bool contains_point(const CSpace& cs, Point p);

/// True iff the closed segment ab lies in the C-space.
bool segment_free(const CSpace& cs, Point a, Point b);

struct VisEdge {
    int a;
    int b;
    double length;
};

struct VisGraph {
    std::vector<Point> vertices;
    std::vector<VisEdge> edges;
    std::vector<std::vector<std::pair<int, double>>> adjacency;
};

/// All C-space polygon vertices, joined whenever the segment between them is
/// free. Brute force O(V^2 m).
VisGraph build_visibility_graph(const CSpace& cs);

struct ContinuousPath {
    double length = 0.0;
    std::vector<Point> polyline;
};

/// Shortest paths through a fixed C-space, reusing one visibility graph.
/// Holds a pointer to `cs`, which must outlive the finder.
class PathFinder {
public:
    explicit PathFinder(const CSpace& cs);
    PathFinder(const CSpace& cs, VisGraph graph);

    /// Throws Error(unreachable) when a and b lie in different components and
    /// Error(input) when either lies outside the C-space.
    ContinuousPath shortest_path(Point a, Point b) const;
    std::optional<ContinuousPath> try_shortest_path(Point a, Point b) const;

    const VisGraph& graph() const noexcept { return graph_; }
    const CSpace& cspace() const noexcept { return *cs_; }

private:
    const CSpace* cs_;
    VisGraph graph_;
};

ContinuousPath shortest_path_continuous(const CSpace& cs, Point a, Point b);

nlohmann::json to_json(Point p);
Point point_from_json(const nlohmann::json& j);

}  // namespace hexaplan
