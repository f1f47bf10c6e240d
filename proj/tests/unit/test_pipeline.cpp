#include <doctest.h>

#include <cmath>

#include "hexaplan/error.hpp"
#include "hexaplan/pipeline.hpp"
#include "oracles.hpp"

using namespace hexaplan;

namespace {

// Two 10x10 rooms joined by a corridor 3.8 wide, with a side room above the
// corridor's middle.
Environment dumbbell_with_alcove() {
    Ring outer{{0, 0},   {10, 0},  {10, 3.1}, {30, 3.1}, {30, 0},  {40, 0},  {40, 10}, {30, 10},
               {30, 6.9}, {24, 6.9}, {24, 14},  {16, 14},  {16, 6.9}, {10, 6.9}, {10, 10}, {0, 10}};
    return make_environment(outer, {}, 1.0);
}

std::vector<std::vector<int>> adjacency(const Roadmap& rm) {
    std::vector<std::vector<int>> adj(rm.node_count());
    for (const auto& e : rm.edges) {
        adj[static_cast<std::size_t>(e.a)].push_back(e.b);
        adj[static_cast<std::size_t>(e.b)].push_back(e.a);
    }
    return adj;
}

}  // namespace

TEST_CASE("single robot in the empty square") {
    const Environment env = oracle::square_env(35.0);
    Instance inst;
    inst.starts = {{4.3, 5.1}};
    inst.goals = {{29.6, 27.2}};
    const PlanResult res = plan(env, inst);
    const PlanReport& rep = res.report;
    const double side = res.roadmap->side;
    // One robot alone: the discrete makespan is its hop distance.
    const auto adj = adjacency(*res.roadmap);
    const auto hops = oracle::hops_from(adj, res.discrete.start_node[0]);
    CHECK(rep.makespan_steps == hops[static_cast<std::size_t>(res.discrete.goal_node[0])]);
    const double pre = distance(inst.starts[0], res.roadmap->nodes[static_cast<std::size_t>(res.discrete.start_node[0])]);
    const double post = distance(inst.goals[0], res.roadmap->nodes[static_cast<std::size_t>(res.discrete.goal_node[0])]);
    CHECK(rep.t_f == doctest::Approx(pre + rep.makespan_steps * side + post).epsilon(1e-12));
    CHECK(rep.t_f == doctest::Approx(rep.prefix_time + rep.makespan_steps * rep.step_duration + rep.suffix_time));
    CHECK(pre <= side + 1e-9);
    CHECK(post <= side + 1e-9);
    const double d = distance(inst.starts[0], inst.goals[0]);
    CHECK(rep.lower_bound == doctest::Approx(d));
    // Hexagonal detour bound plus the two snap moves.
    CHECK(rep.t_f <= 4.0 / 3.0 * (d + 2.0 * side) + side / 3.0 + 2.0 * side);
    CHECK(rep.optimality_ratio >= 1.0);
    REQUIRE(res.plan.size() == 1);
    CHECK(res.plan.trajectories[0].front().p == inst.starts[0]);
    CHECK(res.plan.trajectories[0].back().p == inst.goals[0]);
}

TEST_CASE("colinear endpoints on a square lattice") {
    const Environment env = oracle::square_env(35.0);
    const CSpace cs = compute_cspace(env, 1.0);
    const Lattice lat = impose_lattice(cs, TilingSpec::minimal(TilingKind::square));
    const Roadmap rm = roadmap_from_lattice(lat);
    // Two nodes on one lattice row, far apart.
    int a = -1, b = -1;
    for (int v = 0; v < static_cast<int>(rm.node_count()) && b < 0; ++v) {
        if (a < 0 && rm.nodes[v].x < 8 && rm.nodes[v].y > 15) a = v;
        if (a >= 0 && std::abs(rm.nodes[v].y - rm.nodes[a].y) < 1e-9 && rm.nodes[v].x > 26) b = v;
    }
    REQUIRE(a >= 0);
    REQUIRE(b >= 0);
    Instance inst;
    inst.starts = {rm.nodes[a]};
    inst.goals = {rm.nodes[b]};
    PlanConfig cfg;
    cfg.tiling = TilingKind::square;
    const PlanResult res = plan(env, inst, cfg);
    const double L = distance(inst.starts[0], inst.goals[0]);
    CHECK(res.report.optimality_ratio <= (2.0 * res.roadmap->side + L) / L);
    CHECK(res.report.optimality_ratio == doctest::Approx(1.0));
}

TEST_CASE("three robots around one obstacle") {
    const Environment env = oracle::box_env(30.0, 20.0, {oracle::rect(12, 7, 18, 13)});
    Instance inst;
    inst.starts = {{3, 10}, {15, 3}, {27, 10}};
    inst.goals = {{27, 10}, {15, 17}, {3, 10}};
    const PlanResult res = plan(env, inst);
    const CSpace cs = compute_cspace(env, 1.0);
    CHECK_FALSE(validate_plan(res.plan, inst, cs, res.report.step_duration));
    CHECK(res.report.optimality_ratio >= 1.0);
    const auto adj = adjacency(*res.roadmap);
    CHECK_FALSE(oracle::plan_violation(adj, res.discrete.start_node, res.discrete.goal_node, res.discrete_plan.paths));
}

TEST_CASE("swap through a narrow corridor") {
    const Environment env = dumbbell_with_alcove();
    Instance inst;
    inst.starts = {{5, 5}, {35, 5}};
    inst.goals = {{35, 5}, {5, 5}};
    const PlanResult res = plan(env, inst);
    const CSpace cs = compute_cspace(env, 1.0);
    CHECK_FALSE(validate_plan(res.plan, inst, cs, res.report.step_duration));
    const auto adj = adjacency(*res.roadmap);
    const auto& di = res.discrete;
    CHECK_FALSE(oracle::plan_violation(adj, di.start_node, di.goal_node, res.discrete_plan.paths));
    // Bridge exclusion only removes options.
    const auto best = oracle::joint_bfs(adj, di.start_node, di.goal_node, 80);
    REQUIRE(best);
    CHECK(res.discrete_plan.makespan_steps >= *best);
    CHECK(res.plan.t_f > 0.0);
}

TEST_CASE("conflicting prefixes are serialized") {
    const Roadmap rm = roadmap_from_graph({{6, 0}, {3, -3}, {9, -3}}, {{0, 2}, {1, 2}}, 2.5);
    DiscreteInstance di = make_discrete(rm, {0, 1}, {0, 1});
    di.prefix = {{{0, 0}, 0}, {{3, 3}, 1}};
    di.suffix = {{{6, 0}, 0}, {{3, -3}, 1}};
    const DiscretePlan dp{{{0}, {1}}, 0};
    PlanReport rep;
    const ContinuousPlan p = lift(di, dp, 1.0, &rep);
    CHECK(rep.serialized_prefix);
    CHECK_FALSE(rep.serialized_suffix);
    CHECK(min_separation(p.trajectories[0], p.trajectories[1]) >= 2.0);
    CHECK(rep.prefix_time == doctest::Approx(12.0));
    CHECK(p.t_f == doctest::Approx(12.0));
}

TEST_CASE("exact separation of two linear motions") {
    // Crossing at right angles, meeting at the origin at t = 1.
    const std::vector<Breakpoint> a{{0, {-1, 0}}, {2, {1, 0}}};
    const std::vector<Breakpoint> b{{0, {0, -1}}, {2, {0, 1}}};
    double at = -1;
    CHECK(min_separation(a, b, &at) == doctest::Approx(0.0));
    CHECK(at == doctest::Approx(1.0));
    const std::vector<Breakpoint> c{{0, {0, -1}}, {1, {0, -1}}, {3, {0, 1}}};
    // Second robot starts one time unit late; compare with dense sampling.
    double sampled = 1e9;
    ContinuousPlan tmp;
    tmp.trajectories = {a, c};
    for (int s = 0; s <= 200000; ++s) {
        const double t = 2.0 * s / 200000;
        sampled = std::min(sampled, distance(tmp.position(0, t), tmp.position(1, t)));
    }
    CHECK(min_separation(a, c) == doctest::Approx(sampled).epsilon(1e-6));
}

TEST_CASE("plan validator catches violations") {
    const Environment env = oracle::square_env(20.0);
    const CSpace cs = compute_cspace(env, 1.0);
    Instance inst;
    inst.starts = {{3, 10}, {17, 10}};
    inst.goals = {{17, 10}, {3, 10}};
    SUBCASE("head-on swap") {
        ContinuousPlan p;
        p.t_f = 14;
        p.trajectories = {{{0, {3, 10}}, {14, {17, 10}}}, {{0, {17, 10}}, {14, {3, 10}}}};
        const auto v = validate_plan(p, inst, cs, 2.0);
        REQUIRE(v);
        CHECK(v->kind == ViolationKind::clearance);
        CHECK(v->robot == 0);
        CHECK(v->other == 1);
        CHECK(v->time > 6.0);
        CHECK(v->time < 8.0);
    }
    SUBCASE("too fast") {
        ContinuousPlan p;
        p.t_f = 14.0 / 1.01;
        Instance one;
        one.starts = {{3, 10}};
        one.goals = {{17, 10}};
        p.trajectories = {{{0, {3, 10}}, {p.t_f, {17, 10}}}};
        const auto v = validate_plan(p, one, cs, 2.0);
        REQUIRE(v);
        CHECK(v->kind == ViolationKind::speed);
        CHECK(v->value == doctest::Approx(1.01));
    }
    SUBCASE("wrong goal and leaving the free space") {
        Instance one;
        one.starts = {{3, 10}};
        one.goals = {{17, 10}};
        ContinuousPlan p;
        p.t_f = 20;
        p.trajectories = {{{0, {3, 10}}, {20, {17, 12}}}};
        CHECK(validate_plan(p, one, cs, 2.0)->kind == ViolationKind::endpoint);
        p.t_f = 30;
        p.trajectories = {{{0, {3, 10}}, {15, {10, 19.5}}, {30, {17, 10}}}};
        CHECK(validate_plan(p, one, cs, 2.0)->kind == ViolationKind::containment);
    }
    SUBCASE("one robot waits") {
        ContinuousPlan p;
        p.t_f = 14;
        Instance two;
        two.starts = {{3, 10}, {10, 3}};
        two.goals = {{17, 10}, {10, 3}};
        p.trajectories = {{{0, {3, 10}}, {14, {17, 10}}}, {{0, {10, 3}}, {14, {10, 3}}}};
        CHECK_FALSE(validate_plan(p, two, cs, 2.0));
    }
}

TEST_CASE("robots already at their goals") {
    const Environment env = oracle::square_env(20.0);
    Instance inst;
    inst.starts = {{4, 4}, {15, 15}};
    inst.goals = inst.starts;
    const PlanResult res = plan(env, inst);
    CHECK(res.report.makespan_steps == 0);
    CHECK(res.report.optimality_ratio == 1.0);
}

TEST_CASE("plan output is deterministic") {
    const Environment env = oracle::square_env(35.0);
    Instance inst;
    inst.starts = {{3, 3}, {10, 30}, {30, 5}, {18, 18}, {25, 25}};
    inst.goals = {{30, 30}, {30, 8}, {4, 28}, {6, 15}, {12, 12}};
    PlanConfig cfg;
    cfg.k = 2;
    const auto a = plan_to_json(plan(env, inst, cfg).plan, plan(env, inst, cfg).report).dump();
    const PlanResult r = plan(env, inst, cfg);
    const auto b = plan_to_json(r.plan, r.report).dump();
    CHECK(a == b);
    CHECK(b.find("timing") == std::string::npos);
    CHECK(plan_to_json(r.plan, r.report, true).dump().find("timing") != std::string::npos);
}

TEST_CASE("unreachable goal names the robot") {
    // The wall leaves gaps too narrow for the robot.
    const Environment env = oracle::box_env(30.0, 12.0, {oracle::rect(14, 0.5, 16, 11.5)});
    Instance inst;
    inst.starts = {{3, 6}, {5, 3}};
    inst.goals = {{8, 8}, {25, 6}};
    try {
        plan(env, inst);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::infeasible);
        CHECK(e.robot() == 1);
    }
}
