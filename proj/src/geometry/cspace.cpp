#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

// Integer rescaling in boolean ops moves vertices by ~1e-7.
#define BOOST_GEOMETRY_NO_ROBUSTNESS
#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>

#include "hexaplan/error.hpp"
#include "hexaplan/geometry.hpp"

namespace hexaplan {

namespace {

namespace bg = boost::geometry;
using BPoint = bg::model::d2::point_xy<double>;
using BPolygon = bg::model::polygon<BPoint, /*clockwise=*/false, /*closed=*/true>;
using BMulti = bg::model::multi_polygon<BPolygon>;
using BMultiPoint = bg::model::multi_point<BPoint>;

constexpr int kCapSegments = 8;
constexpr double kMinRegionArea = 1e-10;

// Parity test; callers handle the boundary band separately.
bool inside_parity(const Ring& ring, Point p) {
    bool inside = false;
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point a = ring[j];
        const Point b = ring[i];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x) inside = !inside;
        }
    }
    return inside;
}

// Region swept by a disc of radius r along segment pq, over-approximated by
// sweeping an 8-gon circumscribing the disc. The 8-gon is rotated so two of
// its faces are parallel to pq, making the long sides exact offsets.
BPolygon inflated_segment(Point p, Point q, double r) {
    const double phi = std::atan2(q.y - p.y, q.x - p.x);
    const double step = 2.0 * std::numbers::pi / kCapSegments;
    const double circum = r / std::cos(step / 2.0);
    BMultiPoint pts;
    for (const Point c : {p, q}) {
        for (int k = 0; k < kCapSegments; ++k) {
            const double a = phi + step / 2.0 + k * step;
            bg::append(pts, BPoint(c.x + circum * std::cos(a), c.y + circum * std::sin(a)));
        }
    }
    BPolygon hull;
    bg::convex_hull(pts, hull);
    bg::correct(hull);
    return hull;
}

BMulti union_all(std::vector<BMulti> parts) {
    if (parts.empty()) return {};
    while (parts.size() > 1) {
        std::vector<BMulti> next;
        next.reserve((parts.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < parts.size(); i += 2) {
            BMulti merged;
            bg::union_(parts[i], parts[i + 1], merged);
            next.push_back(std::move(merged));
        }
        if (parts.size() % 2 == 1) next.push_back(std::move(parts.back()));
        parts = std::move(next);
    }
    return parts.front();
}

BPolygon::ring_type to_bring(const Ring& ring) {
    BPolygon::ring_type out;
    for (const Point& p : ring) out.push_back(BPoint(p.x, p.y));
    return out;
}

Ring from_bring(const BPolygon::ring_type& ring) {
    Ring out;
    for (const BPoint& p : ring) {
        const Point q{p.x(), p.y()};
        if (!out.empty() && distance(out.back(), q) <= kGeomTol) continue;
        out.push_back(q);
    }
    while (out.size() > 1 && distance(out.front(), out.back()) <= kGeomTol) out.pop_back();
    return out;
}

}  // namespace

CSpace::CSpace(std::vector<PolygonWithHoles> regions, double robot_radius)
    : regions_(std::move(regions)), robot_radius_(robot_radius) {
    const double inf = std::numeric_limits<double>::infinity();
    bbox_ = {{inf, inf}, {-inf, -inf}};
    auto add_ring = [&](const Ring& ring) {
        for (std::size_t i = 0; i < ring.size(); ++i) {
            const Point a = ring[i];
            const Point b = ring[(i + 1) % ring.size()];
            boundary_.push_back(a.x, a.y, b.x, b.y);
        }
    };
    for (const PolygonWithHoles& region : regions_) {
        const Bbox b = bbox_of(region.outer);
        bbox_.lo.x = std::min(bbox_.lo.x, b.lo.x);
        bbox_.lo.y = std::min(bbox_.lo.y, b.lo.y);
        bbox_.hi.x = std::max(bbox_.hi.x, b.hi.x);
        bbox_.hi.y = std::max(bbox_.hi.y, b.hi.y);
        add_ring(region.outer);
        for (const Ring& h : region.holes) add_ring(h);
    }
    boundary_.finalize();
}

std::size_t CSpace::hole_count() const {
    std::size_t n = 0;
    for (const auto& r : regions_) n += r.holes.size();
    return n;
}

std::size_t CSpace::vertex_count() const {
    std::size_t n = 0;
    for (const auto& r : regions_) {
        n += r.outer.size();
        for (const auto& h : r.holes) n += h.size();
    }
    return n;
}

double CSpace::boundary_distance(Point p) const {
    if (boundary_.size() == 0) return std::numeric_limits<double>::infinity();
    return std::sqrt(kernels::min_dist_sq_to_segments(boundary_, p.x, p.y).dist_sq);
}

int CSpace::region_of(Point p) const {
    const bool on_boundary = boundary_distance(p) <= kGeomTol;
    for (std::size_t r = 0; r < regions_.size(); ++r) {
        const PolygonWithHoles& region = regions_[r];
        if (on_boundary) {
            if (classify_point(region.outer, p) == -1) continue;
            bool rejected = false;
            for (const Ring& h : region.holes)
                if (classify_point(h, p) == 1) rejected = true;
            if (!rejected) return static_cast<int>(r);
            continue;
        }
        if (!inside_parity(region.outer, p)) continue;
        bool in_hole = false;
        for (const Ring& h : region.holes)
            if (inside_parity(h, p)) {
                in_hole = true;
                break;
            }
        if (!in_hole) return static_cast<int>(r);
    }
    return -1;
}

CSpace compute_cspace(const Environment& env, double radius) {
    if (!(radius >= 0.0) || !std::isfinite(radius))
        throw Error(ErrorKind::input, "robot radius must be a finite number >= 0");
    if (radius == 0.0) return CSpace({PolygonWithHoles{env.outer, env.holes}}, 0.0);

    BPolygon workspace;
    workspace.outer() = to_bring(env.outer);
    for (const Ring& h : env.holes) workspace.inners().push_back(to_bring(h));
    bg::correct(workspace);

    std::vector<BMulti> parts;
    auto add_edges = [&](const Ring& ring) {
        for (std::size_t i = 0; i < ring.size(); ++i) {
            BMulti m;
            m.push_back(inflated_segment(ring[i], ring[(i + 1) % ring.size()], radius));
            parts.push_back(std::move(m));
        }
    };
    add_edges(env.outer);
    for (const Ring& h : env.holes) add_edges(h);
    const BMulti blocked = union_all(std::move(parts));

    BMulti free_space;
    bg::difference(workspace, blocked, free_space);

    std::vector<PolygonWithHoles> regions;
    for (const BPolygon& poly : free_space) {
        if (std::abs(bg::area(poly)) < kMinRegionArea) continue;
        PolygonWithHoles region;
        region.outer = from_bring(poly.outer());
        if (region.outer.size() < 3) continue;
        if (signed_area(region.outer) < 0.0) std::reverse(region.outer.begin(), region.outer.end());
        for (const auto& inner : poly.inners()) {
            Ring hole = from_bring(inner);
            if (hole.size() < 3 || std::abs(signed_area(hole)) < kMinRegionArea) continue;
            if (signed_area(hole) > 0.0) std::reverse(hole.begin(), hole.end());
            region.holes.push_back(std::move(hole));
        }
        regions.push_back(std::move(region));
    }
    return CSpace(std::move(regions), radius);
}

bool contains_point(const CSpace& cs, Point p) {
    if (cs.empty()) return false;
    if (cs.boundary_distance(p) <= kGeomTol) return true;
    return cs.region_of(p) >= 0;
}

bool segment_free(const CSpace& cs, Point a, Point b) {
    if (!contains_point(cs, a) || !contains_point(cs, b)) return false;
    const Point d = b - a;
    const double len2 = dot(d, d);
    if (len2 <= kGeomTol * kGeomTol) return true;

    // Membership can only change where the segment meets the boundary, so it
    // suffices to probe each such parameter and the midpoints between them.
    std::vector<double> params{0.0, 1.0};
    const auto& segs = cs.boundary();
    for (std::size_t k = 0; k < segs.size(); ++k) {
        const Point c{segs.ax[k], segs.ay[k]};
        const Point e{segs.bx[k], segs.by[k]};
        const Point f = e - c;
        const double denom = cross(d, f);
        if (std::abs(denom) > 0.0) {
            const double t = cross(c - a, f) / denom;
            const double u = cross(c - a, d) / denom;
            if (t > 0.0 && t < 1.0 && u >= -1e-12 && u <= 1.0 + 1e-12) params.push_back(t);
        }
        for (const Point v : {c, e}) {
            if (point_segment_distance(v, a, b) <= kGeomTol) {
                const double t = std::clamp(dot(v - a, d) / len2, 0.0, 1.0);
                params.push_back(t);
            }
        }
    }
    std::sort(params.begin(), params.end());
    for (std::size_t i = 0; i + 1 < params.size(); ++i) {
        if (params[i + 1] - params[i] <= 1e-15) continue;
        const double mid = 0.5 * (params[i] + params[i + 1]);
        if (!contains_point(cs, a + mid * d)) return false;
    }
    for (std::size_t i = 1; i + 1 < params.size(); ++i)
        if (!contains_point(cs, a + params[i] * d)) return false;
    return true;
}

}  // namespace hexaplan
