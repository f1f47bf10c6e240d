#include <doctest.h>

#include <cmath>
#include <queue>
#include <random>

#include "hexaplan/error.hpp"
#include "hexaplan/geometry.hpp"
#include "oracles.hpp"

using namespace hexaplan;

namespace {

double cspace_area(const CSpace& cs) {
    double a = 0.0;
    for (const auto& r : cs.regions()) {
        a += signed_area(r.outer);
        for (const auto& h : r.holes) a += signed_area(h);
    }
    return a;
}

// Dijkstra on a fine 16-neighbour grid restricted to free segments; an upper
// bound on the true shortest path that converges as the grid shrinks.
double grid_path(const CSpace& cs, Point a, Point b, double h) {
    const Bbox box = cs.bbox();
    const int nx = static_cast<int>(std::ceil(box.width() / h)) + 1;
    const int ny = static_cast<int>(std::ceil(box.height() / h)) + 1;
    const int n = nx * ny;
    auto pt = [&](int id) { return Point{box.lo.x + (id % nx) * h, box.lo.y + (id / nx) * h}; };
    std::vector<char> ok(n);
    for (int i = 0; i < n; ++i) ok[i] = contains_point(cs, pt(i));
    std::vector<double> dist(n + 1, 1e18);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    for (int i = 0; i < n; ++i)
        if (ok[i] && distance(pt(i), a) < 2 * h && segment_free(cs, a, pt(i))) {
            dist[i] = distance(a, pt(i));
            open.emplace(dist[i], i);
        }
    const int moves[16][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1},
                              {2, 1}, {2, -1}, {-2, 1}, {-2, -1}, {1, 2}, {1, -2}, {-1, 2}, {-1, -2}};
    while (!open.empty()) {
        auto [d, u] = open.top();
        open.pop();
        if (u == n) return d;
        if (d > dist[u]) continue;
        const Point p = pt(u);
        if (distance(p, b) < 2 * h && segment_free(cs, p, b) && d + distance(p, b) < dist[n]) {
            dist[n] = d + distance(p, b);
            open.emplace(dist[n], n);
        }
        const int ux = u % nx, uy = u / nx;
        for (const auto& m : moves) {
            const int vx = ux + m[0], vy = uy + m[1];
            if (vx < 0 || vy < 0 || vx >= nx || vy >= ny) continue;
            const int v = vy * nx + vx;
            if (!ok[v]) continue;
            const double w = distance(p, pt(v));
            if (d + w < dist[v] && segment_free(cs, p, pt(v))) {
                dist[v] = d + w;
                open.emplace(dist[v], v);
            }
        }
    }
    return 1e18;
}

}  // namespace

TEST_CASE("ring helpers") {
    const Ring sq = oracle::rect(0, 0, 2, 2);
    CHECK(signed_area(sq) == doctest::Approx(4.0));
    CHECK(is_simple(sq));
    CHECK_FALSE(is_simple(Ring{{0, 0}, {2, 2}, {2, 0}, {0, 2}}));
    CHECK(classify_point(sq, {1, 1}) == 1);
    CHECK(classify_point(sq, {2, 1}) == 0);
    CHECK(classify_point(sq, {3, 1}) == -1);
    CHECK(point_segment_distance({0, 1}, {-1, 0}, {1, 0}) == doctest::Approx(1.0));
    CHECK(segment_segment_distance({0, 0}, {1, 0}, {0, 2}, {1, 2}) == doctest::Approx(2.0));
    CHECK(segments_intersect({0, 0}, {2, 2}, {0, 2}, {2, 0}));
    CHECK(segments_intersect({0, 0}, {1, 0}, {1, 0}, {1, 5}));
    CHECK_FALSE(segments_intersect({0, 0}, {1, 0}, {0, 1}, {1, 1}));
}

TEST_CASE("environment validation rejects bad input") {
    CHECK_THROWS_AS(make_environment({{0, 0}, {1, 0}}, {}), Error);
    CHECK_THROWS_AS(make_environment({{0, 0}, {2, 2}, {2, 0}, {0, 2}}, {}), Error);
    CHECK_THROWS_AS(make_environment(oracle::rect(0, 0, 10, 10), {oracle::rect(8, 8, 12, 12)}), Error);
    CHECK_THROWS_AS(make_environment(oracle::rect(0, 0, 10, 10),
                                     {oracle::rect(2, 2, 5, 5), oracle::rect(4, 4, 6, 6)}),
                    Error);
    try {
        make_environment({{0, 0}, {1, 0}, {2, 0}}, {});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::input);
        CHECK(exit_code(e.kind()) == 4);
    }
}

TEST_CASE("environment orientation is normalized") {
    Ring cw = oracle::rect(0, 0, 10, 10);
    std::reverse(cw.begin(), cw.end());
    const Environment env = make_environment(cw, {oracle::rect(2, 2, 4, 4)});
    CHECK(signed_area(env.outer) > 0);
    CHECK(signed_area(env.holes[0]) < 0);
    CHECK(env.complexity() == 8);
}

TEST_CASE("environment json round trip") {
    const Environment env = oracle::box_env(10, 8, {oracle::rect(2, 2, 4, 4)}, 0.5);
    const Environment back = environment_from_json(env.to_json());
    CHECK(back.outer == env.outer);
    CHECK(back.holes == env.holes);
    CHECK(back.robot_radius == 0.5);
    CHECK_THROWS_AS(load_environment("/nonexistent/env.json"), Error);
    CHECK_THROWS_AS(environment_from_json(nlohmann::json::parse(R"({"outer": 3})")), Error);
}

TEST_CASE("cspace of an empty square is the shrunk square") {
    const Environment env = oracle::square_env(10);
    const CSpace cs = compute_cspace(env, 1.0);
    REQUIRE(cs.component_count() == 1);
    CHECK(cs.hole_count() == 0);
    CHECK(cspace_area(cs) == doctest::Approx(64.0));
    CHECK(cs.bbox().lo.x == doctest::Approx(1.0));
    CHECK(cs.bbox().hi.y == doctest::Approx(9.0));
    CHECK(contains_point(cs, {1.0, 5.0}));
    CHECK_FALSE(contains_point(cs, {0.99, 5.0}));
}

TEST_CASE("cspace hole around an obstacle") {
    const Environment env = oracle::box_env(20, 20, {oracle::rect(8, 8, 12, 12)});
    const CSpace cs = compute_cspace(env, 1.0);
    REQUIRE(cs.component_count() == 1);
    CHECK(cs.hole_count() == 1);
    CHECK_FALSE(contains_point(cs, {7.05, 10}));
    CHECK(contains_point(cs, {6.9, 10}));
    CHECK(contains_point(cs, {13, 13}));
    CHECK_FALSE(contains_point(cs, {12.6, 12.6}));
    CHECK_FALSE(segment_free(cs, {5, 10}, {15, 10}));
    CHECK(segment_free(cs, {5, 6.5}, {15, 6.5}));
    CHECK(segment_free(cs, {5, 7}, {15, 7}));  // on the offset boundary
}

TEST_CASE("narrow passage splits the cspace") {
    const Environment env = oracle::box_env(30, 20, {oracle::rect(1.5, 9, 28.5, 11)});
    const CSpace cs = compute_cspace(env, 1.0);
    CHECK(cs.component_count() == 2);
    const Environment wide = oracle::box_env(30, 20, {oracle::rect(3, 9, 27, 11)});
    CHECK(compute_cspace(wide, 1.0).component_count() == 1);
    CHECK(compute_cspace(wide, 1.0).hole_count() == 1);
}

TEST_CASE("cspace never admits a point closer than r to an obstacle") {
    const Environment env = oracle::box_env(
        30, 30, {oracle::rect(5, 5, 9, 12), Ring{{15, 15}, {22, 17}, {17, 22}}, oracle::rect(20, 4, 26, 6)});
    const CSpace cs = compute_cspace(env, 1.0);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 30.0);
    int inside = 0;
    for (int i = 0; i < 5000; ++i) {
        const Point p{u(rng), u(rng)};
        const double clr = env.clearance(p);
        if (contains_point(cs, p)) {
            ++inside;
            CHECK(clr >= 1.0 - 1e-9);
        } else if (clr > 1.0 / std::cos(M_PI / 8) + 1e-9) {
            // Points beyond the circumradius of the corner polygon are always free.
            CHECK(contains_point(cs, p));
        }
    }
    CHECK(inside > 2500);
}

TEST_CASE("visibility shortest path around a hole") {
    const Environment env = oracle::box_env(20, 20, {oracle::rect(6, 6, 14, 14)});
    const CSpace cs = compute_cspace(env, 1.0);
    const PathFinder finder(cs);
    const Point a{3, 10}, b{17, 10};
    const ContinuousPath path = finder.shortest_path(a, b);
    CHECK(path.length > distance(a, b));
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < path.polyline.size(); ++i) {
        CHECK(segment_free(cs, path.polyline[i], path.polyline[i + 1]));
        sum += distance(path.polyline[i], path.polyline[i + 1]);
    }
    CHECK(sum == doctest::Approx(path.length));
    CHECK(path.polyline.front() == a);
    CHECK(path.polyline.back() == b);
    const double grid = grid_path(cs, a, b, 0.25);
    CHECK(path.length <= grid + 1e-9);
    // 16-neighbour grids overestimate by at most ~1.3%.
    CHECK(path.length >= grid * 0.98);
    // Straight line when visible.
    CHECK(finder.shortest_path({2, 2}, {18, 2}).length == doctest::Approx(16.0));
}

TEST_CASE("shortest path reports unreachable and outside points") {
    const Environment env = oracle::box_env(30, 20, {oracle::rect(1.5, 9, 28.5, 11)});
    const CSpace cs = compute_cspace(env, 1.0);
    const PathFinder finder(cs);
    try {
        finder.shortest_path({5, 5}, {5, 15});
        FAIL("expected unreachable");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::unreachable);
    }
    CHECK_THROWS_AS(finder.shortest_path({0.2, 5}, {5, 5}), Error);
}

TEST_CASE("point json validation") {
    CHECK(point_from_json(nlohmann::json::parse("[1.5, 2]")) == Point{1.5, 2});
    CHECK_THROWS_AS(point_from_json(nlohmann::json::parse("[1]")), Error);
    CHECK_THROWS_AS(point_from_json(nlohmann::json::parse(R"(["a", 2])")), Error);
}
