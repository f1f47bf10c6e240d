#include <algorithm>
#include <limits>

#include "hexaplan/error.hpp"
#include "hexaplan/geometry.hpp"

namespace hexaplan {

Bbox bbox_of(const Ring& ring) {
    const double inf = std::numeric_limits<double>::infinity();
    Bbox box{{inf, inf}, {-inf, -inf}};
    for (const Point& p : ring) {
        box.lo.x = std::min(box.lo.x, p.x);
        box.lo.y = std::min(box.lo.y, p.y);
        box.hi.x = std::max(box.hi.x, p.x);
        box.hi.y = std::max(box.hi.y, p.y);
    }
    return box;
}

double signed_area(const Ring& ring) {
    double twice = 0.0;
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) twice += cross(ring[i], ring[(i + 1) % n]);
    return 0.5 * twice;
}

double point_segment_distance(Point p, Point a, Point b) {
    const Point d = b - a;
    const double dd = dot(d, d);
    double t = dd > 0.0 ? dot(p - a, d) / dd : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, a + t * d);
}

double segment_segment_distance(Point a, Point b, Point c, Point d) {
    const double o1 = cross(b - a, c - a);
    const double o2 = cross(b - a, d - a);
    const double o3 = cross(d - c, a - c);
    const double o4 = cross(d - c, b - c);
    const bool straddle_ab = (o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0);
    const bool straddle_cd = (o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0);
    if (straddle_ab && straddle_cd) return 0.0;
    return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                     point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

bool segments_intersect(Point a, Point b, Point c, Point d, double tol) {
    return segment_segment_distance(a, b, c, d) <= tol;
}

int classify_point(const Ring& ring, Point p, double tol) {
    const std::size_t n = ring.size();
    bool inside = false;
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = ring[i];
        const Point b = ring[(i + 1) % n];
        if (point_segment_distance(p, a, b) <= tol) return 0;
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x) inside = !inside;
        }
    }
    return inside ? 1 : -1;
}

bool is_simple(const Ring& ring) {
    const std::size_t n = ring.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = ring[i];
        const Point b = ring[(i + 1) % n];
        for (std::size_t j = i + 1; j < n; ++j) {
            const Point c = ring[j];
            const Point d = ring[(j + 1) % n];
            const bool next = j == i + 1;
            const bool wrap = i == 0 && j == n - 1;
            if (next) {
                // Shared vertex b == c: reject folding back onto the previous edge.
                if (point_segment_distance(d, a, b) <= kGeomTol ||
                    point_segment_distance(a, c, d) <= kGeomTol)
                    return false;
            } else if (wrap) {
                // Shared vertex a == d.
                if (point_segment_distance(c, a, b) <= kGeomTol ||
                    point_segment_distance(b, c, d) <= kGeomTol)
                    return false;
            } else if (segments_intersect(a, b, c, d)) {
                return false;
            }
        }
    }
    return true;
}

nlohmann::json to_json(Point p) { return nlohmann::json::array({p.x, p.y}); }

Point point_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw Error(ErrorKind::input, "expected a point [x, y], got " + j.dump());
    const Point p{j[0].get<double>(), j[1].get<double>()};
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw Error(ErrorKind::input, "non-finite coordinate in " + j.dump());
    return p;
}

}  // namespace hexaplan
