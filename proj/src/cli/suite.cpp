#include <algorithm>
#include <cmath>
#include <random>

#include "hexaplan/error.hpp"
#include "hexaplan/suite.hpp"

namespace hexaplan {

namespace {

constexpr double kSize = 35.0;
constexpr long kMaxRejections = 100000;

Ring rect(double x0, double y0, double x1, double y1) { return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}; }

Ring cross(Point c, double arm, double half, double angle) {
    const Ring base{{half, -half}, {arm, -half},  {arm, half},  {half, half},   {half, arm},   {-half, arm},
                    {-half, half}, {-arm, half},  {-arm, -half}, {-half, -half}, {-half, -arm}, {half, -arm}};
    const double cs = std::cos(angle), sn = std::sin(angle);
    Ring out;
    for (Point p : base) out.push_back({c.x + cs * p.x - sn * p.y, c.y + sn * p.x + cs * p.y});
    return out;
}

Ring triangle(Point c, double r, double angle) {
    Ring out;
    for (int k = 0; k < 3; ++k) {
        const double a = angle + k * 2.0 * M_PI / 3.0;
        out.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
    }
    return out;
}

}  // namespace

std::vector<std::string> suite_names() { return {"empty", "plus", "jack", "triangles", "bars"}; }

// Stand-ins for the usual benchmark layouts, all inside one 35 x 35 square.
Environment suite_environment(const std::string& name, double robot_radius) {
    const Ring outer = rect(0, 0, kSize, kSize);
    const Point mid{kSize / 2, kSize / 2};
    std::vector<Ring> holes;
    if (name == "empty") {
    } else if (name == "plus") {
        holes.push_back(cross(mid, 9.0, 2.5, 0.0));
    } else if (name == "jack") {
        for (double x : {9.0, 26.0})
            for (double y : {9.0, 26.0}) holes.push_back(cross({x, y}, 4.0, 1.25, M_PI / 4));
        holes.push_back(cross(mid, 3.5, 1.25, 0.0));
    } else if (name == "triangles") {
        holes.push_back(triangle({8.5, 9.0}, 3.5, M_PI / 2));
        holes.push_back(triangle({26.5, 9.0}, 3.5, -M_PI / 2));
        holes.push_back(triangle({17.5, 17.5}, 4.0, 0.0));
        holes.push_back(triangle({8.5, 26.0}, 3.5, -M_PI / 2));
        holes.push_back(triangle({26.5, 26.0}, 3.5, M_PI / 2));
    } else if (name == "bars") {
        holes.push_back(rect(6.0, 8.0, 29.0, 10.0));
        holes.push_back(rect(6.0, 16.5, 29.0, 18.5));
        holes.push_back(rect(6.0, 25.0, 29.0, 27.0));
    } else {
        throw Error(ErrorKind::input, "unknown environment '" + name + "'");
    }
    return make_environment(outer, std::move(holes), robot_radius);
}

Instance gen_instance(const Environment& env, int n, double min_separation, std::uint64_t seed) {
    return gen_instance(compute_cspace(env, env.robot_radius), n, min_separation, seed);
}

Instance gen_instance(const CSpace& cs, int n, double min_separation, std::uint64_t seed) {
    if (n < 0) throw Error(ErrorKind::input, "robot count must be non-negative");
    if (cs.empty()) throw Error(ErrorKind::input, "free space is empty");
    std::mt19937_64 rng(seed);
    const Bbox box = cs.bbox();
    std::uniform_real_distribution<double> ux(box.lo.x, box.hi.x), uy(box.lo.y, box.hi.y);
    const double sep = min_separation * cs.robot_radius();
    Instance inst;
    auto place = [&](std::vector<Point>& pts, const std::vector<int>* regions) {
        long misses = 0;
        while (static_cast<int>(pts.size()) < n) {
            const Point p{ux(rng), uy(rng)};
            bool ok = contains_point(cs, p);
            if (ok && regions) ok = cs.region_of(p) == (*regions)[pts.size()];
            for (std::size_t j = 0; ok && j < pts.size(); ++j) ok = distance(p, pts[j]) >= sep;
            if (ok) {
                pts.push_back(p);
                misses = 0;
            } else if (++misses >= kMaxRejections) {
                throw Error(ErrorKind::input, "could not place " + std::to_string(n) + " robots at separation " +
                                                  std::to_string(sep) + " (placed " + std::to_string(pts.size()) + ")");
            }
        }
    };
    place(inst.starts, nullptr);
    std::vector<int> regions;
    for (Point p : inst.starts) regions.push_back(cs.region_of(p));
    place(inst.goals, &regions);
    return inst;
}

}  // namespace hexaplan
