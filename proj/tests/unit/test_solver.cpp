#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <tuple>

#include "hexaplan/error.hpp"
#include "hexaplan/solver.hpp"
#include "oracles.hpp"

using namespace hexaplan;

namespace {

Roadmap roadmap_of(const oracle::Grid& g) { return roadmap_from_graph(g.points, g.edges, 1.0); }

// Distinct random starts and goals on the graph.
std::pair<std::vector<int>, std::vector<int>> random_endpoints(std::mt19937_64& rng, int nodes, int robots) {
    std::vector<int> ids(static_cast<std::size_t>(nodes));
    for (int v = 0; v < nodes; ++v) ids[static_cast<std::size_t>(v)] = v;
    std::shuffle(ids.begin(), ids.end(), rng);
    std::vector<int> s(ids.begin(), ids.begin() + robots);
    std::shuffle(ids.begin(), ids.end(), rng);
    std::vector<int> g(ids.begin(), ids.begin() + robots);
    return {s, g};
}

std::size_t oracle_arc_count(const std::vector<std::vector<int>>& adj, const std::vector<std::vector<int>>& layers) {
    std::size_t n = 0;
    for (std::size_t t = 0; t + 1 < layers.size(); ++t)
        for (int u : layers[t]) {
            const auto& next = layers[t + 1];
            n += std::binary_search(next.begin(), next.end(), u);
            for (int v : adj[static_cast<std::size_t>(u)]) n += std::binary_search(next.begin(), next.end(), v);
        }
    return n;
}

}  // namespace

TEST_CASE("underestimate of T") {
    const auto g = oracle::grid_graph(3, 3);
    const Roadmap rm = roadmap_of(g);
    CHECK(underestimate_T(make_discrete(rm, {4}, {4})) == 0);
    CHECK(underestimate_T(make_discrete(rm, {0}, {1})) == 1);
    CHECK(underestimate_T(make_discrete(rm, {0, 2}, {8, 6})) == 4);

    const Roadmap split = roadmap_from_graph({{0, 0}, {1, 0}, {5, 0}, {6, 0}}, {{0, 1}, {2, 3}}, 1.0);
    try {
        underestimate_T(make_discrete(split, {0, 1}, {1, 3}));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::infeasible);
        CHECK(e.robot() == 1);
    }
}

TEST_CASE("reach sets on the 3x3 grid") {
    const auto g = oracle::grid_graph(3, 3);
    const Roadmap rm = roadmap_of(g);
    const auto di = make_discrete(rm, {0}, {8});
    const auto reach = reachable_sets(di, 4);
    CHECK(reach[0][0] == std::vector<int>{0});
    CHECK(reach[0][1] == std::vector<int>{1, 3});
    CHECK(reach[0][2] == std::vector<int>{2, 4, 6});
    CHECK(reach[0][4] == std::vector<int>{8});
    // Tight T: layers are the shortest-path nodes at that depth.
    const auto tight = reachable_sets(make_discrete(rm, {0}, {2}), 2);
    CHECK(tight[0][1] == std::vector<int>{1});
}

TEST_CASE("reach sets equal the double BFS construction") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const auto g = oracle::random_graph(rng, 12, 6);
        const Roadmap rm = roadmap_of(g);
        auto [s, goal] = random_endpoints(rng, 12, 3);
        const auto di = make_discrete(rm, s, goal);
        const int T = underestimate_T(di) + trial % 3;
        const auto reach = reachable_sets(di, T);
        for (int i = 0; i < 3; ++i) {
            const auto layers = oracle::double_bfs_layers(g.adj, s[i], goal[i], T);
            CHECK(reach[i] == layers);
        }
    }
}

TEST_CASE("time expansion arcs") {
    const Roadmap two = roadmap_from_graph({{0, 0}, {1, 0}}, {{0, 1}}, 1.0);
    const auto di = make_discrete(two, {0}, {1});
    const auto tx = time_expand(di, 1, reachable_sets(di, 1));
    REQUIRE(tx);
    REQUIRE(tx->arcs.size() == 1);
    CHECK(tx->arcs[0] == Arc{0, 0, 1, 0, 0});
    CHECK_FALSE(time_expand(di, 0, reachable_sets(di, 0)));

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        const auto g = oracle::random_graph(rng, 10, 5);
        const Roadmap rm = roadmap_of(g);
        auto [s, goal] = random_endpoints(rng, 10, 2);
        const auto d = make_discrete(rm, s, goal);
        const int T = underestimate_T(d) + 1;
        const auto a = time_expand(d, T, reachable_sets(d, T));
        const auto b = time_expand(d, T + 1, reachable_sets(d, T + 1));
        const auto full = time_expand(d, T, full_sets(d, T));
        REQUIRE(a);
        REQUIRE(b);
        REQUIRE(full);
        std::size_t expected = 0;
        for (int i = 0; i < 2; ++i)
            expected += oracle_arc_count(g.adj, oracle::double_bfs_layers(g.adj, s[i], goal[i], T));
        CHECK(a->arcs.size() == expected);
        // Longer horizon keeps every arc.
        std::set<std::tuple<int, int, int, int>> later;
        for (const Arc& x : b->arcs) later.insert({x.robot, x.u, x.v, x.t});
        for (const Arc& x : a->arcs) CHECK(later.count({x.robot, x.u, x.v, x.t}) == 1);
        if (full->arcs.size() != a->arcs.size()) CHECK(a->arcs.size() < full->arcs.size());
        for (const Arc& x : a->arcs) {
            CHECK((x.u == x.v || rm.find_edge(x.u, x.v) == x.edge));
            const auto& now = a->reach[x.robot][x.t];
            const auto& next = a->reach[x.robot][x.t + 1];
            CHECK(std::binary_search(now.begin(), now.end(), x.u));
            CHECK(std::binary_search(next.begin(), next.end(), x.v));
        }
    }
}

TEST_CASE("model construction") {
    SUBCASE("path of three nodes") {
        const Roadmap rm = roadmap_from_graph({{0, 0}, {1, 0}, {2, 0}}, {{0, 1}, {1, 2}}, 1.0);
        const auto di = make_discrete(rm, {0}, {2});
        const auto tx = time_expand(di, 2, reachable_sets(di, 2));
        REQUIRE(tx);
        const IlpModel m = build_ilp(*tx, di);
        CHECK(m.num_vars == static_cast<int>(tx->arcs.size()));
        const auto r = solve_feasibility(m);
        REQUIRE(r.status == SolveStatus::feasible);
        CHECK(std::count(r.assignment.begin(), r.assignment.end(), 1) == 2);
    }
    SUBCASE("head-on swap on one edge") {
        const Roadmap rm = roadmap_from_graph({{0, 0}, {1, 0}}, {{0, 1}}, 1.0);
        const auto di = make_discrete(rm, {0, 1}, {1, 0});
        const auto tx = time_expand(di, 1, reachable_sets(di, 1));
        REQUIRE(tx);
        CHECK(solve_feasibility(build_ilp(*tx, di)).status == SolveStatus::infeasible);
    }
    SUBCASE("corner robots on the 3x3 grid") {
        const auto g = oracle::grid_graph(3, 3);
        const Roadmap rm = roadmap_of(g);
        const auto di = make_discrete(rm, {0, 2}, {8, 6});
        const auto t3 = time_expand(di, 3, reachable_sets(di, 3));
        CHECK_FALSE(t3);  // 4 hops cannot fit in 3 steps
        const auto t3_full = time_expand(di, 3, full_sets(di, 3));
        REQUIRE(t3_full);
        CHECK(solve_feasibility(build_ilp(*t3_full, di)).status == SolveStatus::infeasible);
        const auto t4 = time_expand(di, 4, reachable_sets(di, 4));
        REQUIRE(t4);
        CHECK(solve_feasibility(build_ilp(*t4, di)).status == SolveStatus::feasible);
        REQUIRE(oracle::joint_bfs(g.adj, {0, 2}, {8, 6}) == 4);
    }
    SUBCASE("variables carry their arc") {
        const auto g = oracle::grid_graph(2, 3);
        const Roadmap rm = roadmap_of(g);
        const auto di = make_discrete(rm, {0, 5}, {5, 0});
        const auto tx = time_expand(di, 4, reachable_sets(di, 4));
        REQUIRE(tx);
        const IlpModel m = build_ilp(*tx, di);
        REQUIRE(m.tags.size() == tx->arcs.size());
        for (std::size_t k = 0; k < tx->arcs.size(); ++k) {
            CHECK(m.tags[k].robot == tx->arcs[k].robot);
            CHECK(m.tags[k].u == tx->arcs[k].u);
            CHECK(m.tags[k].t == tx->arcs[k].t);
        }
        CHECK_NOTHROW(m.validate());
    }
}

TEST_CASE("discrete solve on the 3x3 grid") {
    const auto g = oracle::grid_graph(3, 3);
    const Roadmap rm = roadmap_of(g);
    const auto still = make_discrete(rm, {0, 4}, {0, 4});
    const DiscretePlan p0 = solve_discrete(still);
    CHECK(p0.makespan_steps == 0);
    CHECK(p0.paths == std::vector<std::vector<int>>{{0}, {4}});

    const auto di = make_discrete(rm, {0, 2}, {8, 6});
    DiscreteStats stats;
    const DiscretePlan plan = solve_discrete(di, {}, &stats);
    CHECK(plan.makespan_steps == 4);
    CHECK(stats.lower_T == 4);
    CHECK(stats.variables > 0);
    CHECK_FALSE(check_discrete_plan(plan, di));
    CHECK_FALSE(oracle::plan_violation(g.adj, {0, 2}, {8, 6}, plan.paths));
}

TEST_CASE("rotation on a 4-cycle matches joint BFS") {
    const Roadmap rm = roadmap_from_graph({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, 1.0);
    std::vector<std::vector<int>> adj(4);
    for (const auto& e : rm.edges) {
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }
    std::mt19937_64 rng(50);
    for (int seed = 0; seed < 50; ++seed) {
        auto [s, goal] = random_endpoints(rng, 4, 2);
        const auto di = make_discrete(rm, s, goal);
        const auto expected = oracle::joint_bfs(adj, s, goal);
        REQUIRE(expected);
        const DiscretePlan plan = solve_discrete(di);
        CHECK(plan.makespan_steps == *expected);
        CHECK_FALSE(oracle::plan_violation(adj, s, goal, plan.paths));
    }
}

TEST_CASE("makespan equals joint BFS and pruning is lossless") {
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 100; ++trial) {
        const int nodes = 5 + trial % 8;
        const int robots = 1 + trial % 3;
        const auto g = oracle::random_graph(rng, nodes, trial % 4);
        const Roadmap rm = roadmap_of(g);
        auto [s, goal] = random_endpoints(rng, nodes, robots);
        const auto di = make_discrete(rm, s, goal);
        // Proving infeasibility at every T up to a long horizon is slow; keep it short.
        const auto expected = oracle::joint_bfs(g.adj, s, goal, 12);
        DiscreteOptions pruned, full;
        full.prune = false;
        pruned.max_T = full.max_T = 12;
        if (!expected) {
            CHECK_THROWS_AS(solve_discrete(di, pruned), Error);
            continue;
        }
        const DiscretePlan a = solve_discrete(di, pruned);
        const DiscretePlan b = solve_discrete(di, full);
        CHECK(a.makespan_steps == *expected);
        CHECK(b.makespan_steps == *expected);
        CHECK_FALSE(oracle::plan_violation(g.adj, s, goal, a.paths));
        CHECK_FALSE(oracle::plan_violation(g.adj, s, goal, b.paths));

        // Feasible one step later too.
        const auto tx = time_expand(di, a.makespan_steps + 1, reachable_sets(di, a.makespan_steps + 1));
        REQUIRE(tx);
        CHECK(solve_feasibility(build_ilp(*tx, di)).status == SolveStatus::feasible);
    }
}

TEST_CASE("plan checker rejects bad plans") {
    const auto g = oracle::grid_graph(1, 3);
    const Roadmap rm = roadmap_of(g);
    const auto di = make_discrete(rm, {0, 1}, {1, 0});
    DiscretePlan swap{{{0, 1}, {1, 0}}, 1};
    REQUIRE(check_discrete_plan(swap, di));
    CHECK(check_discrete_plan(swap, di)->find("swap") != std::string::npos);
    DiscretePlan jump{{{0, 2, 1}, {1, 1, 0}}, 2};
    CHECK(check_discrete_plan(jump, di));
    DiscretePlan meet{{{0, 1, 1}, {1, 1, 0}}, 2};
    CHECK(check_discrete_plan(meet, di));
    DiscretePlan wrong_goal{{{0, 1}, {1, 2}}, 1};
    CHECK(check_discrete_plan(wrong_goal, di));
}

TEST_CASE("horizon and budget limits") {
    // Swapping on a path has no solution at any T.
    const Roadmap rm = roadmap_from_graph({{0, 0}, {1, 0}, {2, 0}}, {{0, 1}, {1, 2}}, 1.0);
    const auto di = make_discrete(rm, {0, 2}, {2, 0});
    DiscreteOptions opts;
    opts.max_T = 6;
    try {
        solve_discrete(di, opts);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::timeout);
    }
    DiscreteOptions tiny;
    tiny.budget.max_seconds = 0.0;
    try {
        solve_discrete(make_discrete(rm, {0}, {2}), tiny);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::budget);
    }
}
