// One PASS/FAIL line per acceptance criterion. Tolerances are fixed below.
// Exit status is 0 only when every criterion passes.

#include <algorithm>
#include <cstdarg>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hexaplan/bench.hpp"
#include "hexaplan/error.hpp"
#include "hexaplan/lattice.hpp"
#include "hexaplan/pipeline.hpp"
#include "hexaplan/roadmap.hpp"
#include "hexaplan/solver.hpp"
#include "hexaplan/split.hpp"
#include "hexaplan/suite.hpp"
#include "oracles.hpp"

using namespace hexaplan;

namespace {

constexpr double kDensityTol = 1e-3;
constexpr double kSweepTol = 1e-3;
constexpr double kSweepResolution = 1e-3;
constexpr double kFig7Seconds = 1.0;
constexpr int kOracleInstances = 200;
// Both sides stop at this makespan. Unsatisfiable models grow expensive to
// refute as T rises, and the exhaustive BFS below checks that no instance
// has an optimum past the cut.
constexpr int kOracleMaxSteps = 12;
constexpr int kExhaustiveSteps = 2000;
constexpr double kOracleSeconds = 300.0;
constexpr int kStretchPairs = 100;
constexpr double kStretchMinDistance = 10.0;
constexpr double kStretchBound = 1.35;
constexpr double kStretchSeconds = 60.0;
constexpr double kTopologySeconds = 10.0;
constexpr double kInstanceSeconds = 120.0;
constexpr double kSolvedFraction = 0.9;
constexpr double kRatioMax = 1.7;
constexpr int kExternalInstances = 3;
constexpr int kExternalSeedLimit = 20;
constexpr double kSubModelFraction = 0.75;
constexpr double kClearanceTol = 1e-6;
constexpr double kSpeedTol = 1e-9;
constexpr int kSafetySamplesPerStep = 50;

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

// Every deterministic artifact a criterion produces, for the rerun check.
struct Record {
    std::ostringstream text;
};

// Plans collected for the safety check.
struct SafetyItem {
    std::string label;
    Environment env;
    Instance inst;
    ContinuousPlan plan;
    double step = 0.0;
};

struct Run {
    Record record;
    std::vector<SafetyItem> plans;
    std::string external;  // solver spec, empty when none is available
};

Point at(const std::vector<Breakpoint>& tr, double t) {
    if (t <= tr.front().t) return tr.front().p;
    for (std::size_t k = 0; k + 1 < tr.size(); ++k)
        if (t <= tr[k + 1].t) {
            const double span = tr[k + 1].t - tr[k].t;
            return span > 0.0 ? lerp(tr[k].p, tr[k + 1].p, (t - tr[k].t) / span) : tr[k + 1].p;
        }
    return tr.back().p;
}

// Independent of the library validator: own interpolation, own sampling.
std::string check_safety(const SafetyItem& item) {
    const CSpace cs = compute_cspace(item.env, item.env.robot_radius);
    const auto& trs = item.plan.trajectories;
    if (trs.size() != item.inst.size()) return "robot count";
    const double r = item.env.robot_radius;
    for (std::size_t i = 0; i < trs.size(); ++i) {
        const auto& tr = trs[i];
        if (distance(tr.front().p, item.inst.starts[i]) > 1e-9 || distance(tr.back().p, item.inst.goals[i]) > 1e-9)
            return fmt("robot %zu endpoints", i);
        if (std::abs(tr.back().t - item.plan.t_f) > 1e-9) return fmt("robot %zu ends at %.6f", i, tr.back().t);
        for (std::size_t k = 0; k + 1 < tr.size(); ++k) {
            const double dt = tr[k + 1].t - tr[k].t, d = distance(tr[k].p, tr[k + 1].p);
            if (dt < 0.0 || d > dt * (1.0 + kSpeedTol) + 1e-12) return fmt("robot %zu too fast near t=%.4f", i, tr[k].t);
            if (!segment_free(cs, tr[k].p, tr[k + 1].p)) return fmt("robot %zu leaves the free space", i);
        }
    }
    const double dt = item.step / kSafetySamplesPerStep;
    const int samples = static_cast<int>(std::ceil(item.plan.t_f / dt));
    std::vector<Point> pos(trs.size());
    for (int s = 0; s <= samples; ++s) {
        const double t = std::min(item.plan.t_f, s * dt);
        for (std::size_t i = 0; i < trs.size(); ++i) pos[i] = at(trs[i], t);
        for (std::size_t i = 0; i < trs.size(); ++i)
            for (std::size_t j = i + 1; j < trs.size(); ++j)
                if (distance(pos[i], pos[j]) < 2.0 * r - kClearanceTol)
                    return fmt("robots %zu and %zu are %.6f apart at t=%.4f", i, j, distance(pos[i], pos[j]), t);
    }
    return "";
}

Outcome tiling_densities() {
    const std::pair<TilingKind, double> want[] = {{TilingKind::hexagonal, std::numbers::pi / (4 * std::sqrt(3.0))},
                                                  {TilingKind::square, std::numbers::pi / 8},
                                                  {TilingKind::triangular, std::numbers::pi / (8 * std::sqrt(3.0))}};
    Outcome o{true, ""};
    for (const auto& [kind, value] : want) {
        const double got = tiling_density(kind);
        o.pass = o.pass && std::abs(got - value) <= kDensityTol;
        o.detail += fmt("%s %.4f ", to_string(kind), got);
    }
    o.pass = o.pass && std::abs(tiling_density(TilingKind::hexagonal) - 0.4534) <= kDensityTol &&
             std::abs(tiling_density(TilingKind::square) - 0.3927) <= kDensityTol &&
             std::abs(tiling_density(TilingKind::triangular) - 0.2267) <= kDensityTol;
    return o;
}

Outcome side_lengths() {
    const double hex = min_safe_side(TilingKind::hexagonal), sq = min_safe_side(TilingKind::square);
    // Adjacent edges of a hexagon meet at 120 degrees, of a square at 90.
    const double dh = oracle::adjacent_edge_sweep(hex, 2.0 * std::numbers::pi / 3.0, kSweepResolution);
    const double ds = oracle::adjacent_edge_sweep(sq, std::numbers::pi / 2.0, kSweepResolution);
    const bool exact = hex == 4.0 / std::sqrt(3.0) && sq == 4.0 / std::sqrt(2.0);
    return {exact && std::abs(dh - 2.0) <= kSweepTol && std::abs(ds - 2.0) <= kSweepTol,
            fmt("hex side %.6f sweep %.4f, square side %.6f sweep %.4f", hex, dh, sq, ds)};
}

std::string paths_text(const DiscretePlan& p) {
    std::string s;
    for (const auto& path : p.paths) {
        for (int v : path) s += std::to_string(v) + " ";
        s += "| ";
    }
    return s;
}

Outcome fig7(Run& run) {
    const auto t0 = Clock::now();
    const auto g = oracle::grid_graph(3, 3);
    const Roadmap rm = roadmap_from_graph(g.points, g.edges, 1.0);
    const DiscreteInstance di = make_discrete(rm, {0, 2}, {8, 6});
    const DiscretePlan base = solve_discrete(di);
    const SplitPlan sp = kway_split(di, 2);
    std::vector<DiscretePlan> parts;
    std::vector<int> sub_T;
    for (const auto& sub : sp.sub_instances) {
        parts.push_back(solve_discrete(sub));
        sub_T.push_back(parts.back().makespan_steps);
    }
    const DiscretePlan whole = concatenate(parts);
    const bool valid = !check_discrete_plan(whole, di) &&
                       !oracle::plan_violation(g.adj, di.start_node, di.goal_node, whole.paths);
    const auto best = oracle::joint_bfs(g.adj, di.start_node, di.goal_node, 16);
    const double secs = since(t0);
    run.record.text << "fig7 " << paths_text(base) << paths_text(whole) << "\n";
    const bool ok = base.makespan_steps == 4 && best && *best == 4 && sub_T == std::vector<int>{2, 2} && valid &&
                    secs < kFig7Seconds;
    return {ok, fmt("baseline T=%d (joint BFS %d), pieces T=%d,%d, concatenation %s, %.3f s", base.makespan_steps,
                    best ? *best : -1, sub_T[0], sub_T[1], valid ? "valid" : "INVALID", secs)};
}

Outcome oracle_equivalence(Run& run) {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(2024);
    int agree = 0, unreachable = 0, verdicts = 0, beyond = 0, worst_opt = 0;
    std::string first_bad;
    for (int trial = 0; trial < kOracleInstances; ++trial) {
        const int nodes = std::uniform_int_distribution<int>(3, 12)(rng);
        const int extra = std::uniform_int_distribution<int>(0, nodes)(rng);
        const int robots = std::uniform_int_distribution<int>(1, std::min(3, nodes))(rng);
        const auto g = oracle::random_graph(rng, nodes, extra);
        std::vector<int> ids(static_cast<std::size_t>(nodes));
        for (int v = 0; v < nodes; ++v) ids[static_cast<std::size_t>(v)] = v;
        std::shuffle(ids.begin(), ids.end(), rng);
        const std::vector<int> s(ids.begin(), ids.begin() + robots);
        std::shuffle(ids.begin(), ids.end(), rng);
        const std::vector<int> goal(ids.begin(), ids.begin() + robots);
        const Roadmap rm = roadmap_from_graph(g.points, g.edges, 1.0);
        const DiscreteInstance di = make_discrete(rm, s, goal);
        const auto best = oracle::joint_bfs(g.adj, s, goal, kOracleMaxSteps);
        int got[2] = {-1, -1};
        for (int prune = 0; prune < 2; ++prune) {
            DiscreteOptions opts;
            opts.prune = prune == 1;
            opts.max_T = kOracleMaxSteps;
            try {
                const DiscretePlan p = solve_discrete(di, opts);
                if (oracle::plan_violation(g.adj, s, goal, p.paths)) got[prune] = -2;
                else got[prune] = p.makespan_steps;
            } catch (const Error& e) {
                got[prune] = e.kind() == ErrorKind::timeout || e.kind() == ErrorKind::infeasible ? -1 : -3;
            }
        }
        const int want = best ? *best : -1;
        if (!best) {
            const auto any = oracle::joint_bfs(g.adj, s, goal, kExhaustiveSteps);
            if (any) ++beyond;
            else ++unreachable;
        } else {
            worst_opt = std::max(worst_opt, *best);
        }
        if (got[0] == got[1]) ++verdicts;
        if (got[0] == want && got[1] == want) ++agree;
        else if (first_bad.empty())
            first_bad = fmt(" first mismatch at trial %d: bfs %d, full %d, pruned %d", trial, want, got[0], got[1]);
        run.record.text << "oracle " << trial << " " << got[0] << " " << got[1] << "\n";
    }
    const double secs = since(t0);
    return {agree == kOracleInstances && verdicts == kOracleInstances && beyond == 0 && secs < kOracleSeconds,
            fmt("%d/%d match joint BFS (largest optimum %d, %d without any plan, %d with an optimum past the %d-step "
                "cut), pruning kept %d/%d verdicts, %.1f s%s",
                agree, kOracleInstances, worst_opt, unreachable, beyond, kOracleMaxSteps, verdicts, kOracleInstances,
                secs, first_bad.c_str())};
}

Outcome stretch(Run& run) {
    const auto t0 = Clock::now();
    const Environment env = suite_environment("empty");
    const CSpace cs = compute_cspace(env, 1.0);
    const PathFinder finder(cs);
    const Roadmap rm = build_roadmap(cs, finder, {}, 1.0);
    const Bbox box = cs.bbox();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ux(box.lo.x, box.hi.x), uy(box.lo.y, box.hi.y);
    double worst = 0.0, worst_nearest = 0.0, sum = 0.0;
    int over_nearest = 0, tested = 0;
    while (tested < kStretchPairs) {
        const Point a{ux(rng), uy(rng)}, b{ux(rng), uy(rng)};
        if (!contains_point(cs, a) || !contains_point(cs, b)) continue;
        const double d = finder.shortest_path(a, b).length;
        if (d < kStretchMinDistance) continue;
        const double road = roadmap_path_length(rm, cs, a, b, 2.0 * rm.side);
        if (!std::isfinite(road)) continue;
        ++tested;
        worst = std::max(worst, road / d);
        sum += road / d;
        // For reference: entering and leaving at the nearest nodes only.
        int na = 0, nb = 0;
        for (int v = 1; v < static_cast<int>(rm.node_count()); ++v) {
            if (distance(a, rm.nodes[v]) < distance(a, rm.nodes[na])) na = v;
            if (distance(b, rm.nodes[v]) < distance(b, rm.nodes[nb])) nb = v;
        }
        const double via = distance(a, rm.nodes[na]) + rm.distances_from(na)[nb] + distance(rm.nodes[nb], b);
        worst_nearest = std::max(worst_nearest, via / d);
        over_nearest += via / d > kStretchBound;
        run.record.text << "stretch " << fmt("%.12f %.12f", road, d) << "\n";
    }
    const double secs = since(t0);
    return {worst <= kStretchBound && secs < kStretchSeconds,
            fmt("max %.4f, mean %.4f over %d pairs (entry/exit at any node within 2 side); nearest-node entry would give "
                "max %.4f with %d pairs over %.2f; %.1f s",
                worst, sum / tested, tested, worst_nearest, over_nearest, kStretchBound, secs)};
}

Outcome topology() {
    const auto t0 = Clock::now();
    // Two wide holes in a row; the three gaps are too narrow for a lattice edge.
    const Environment env = oracle::box_env(30, 16, {oracle::rect(2.6, 6, 13.7, 10), oracle::rect(16.3, 6, 27.4, 10)});
    const CSpace cs = compute_cspace(env, 1.0);
    const Lattice lat = impose_lattice(cs, TilingSpec::minimal(TilingKind::hexagonal));
    const Roadmap before = roadmap_from_lattice(lat);
    const TopologyReport pre = verify_topology(before, cs);
    const PathFinder finder(cs);
    RestoreReport rep;
    const Roadmap after = restore_connectivity(before, lat, cs, finder, &rep);
    const TopologyReport post = verify_topology(after, cs);
    const double secs = since(t0);
    return {cs.hole_count() == 2 && !pre.holes_match && post.components_match && post.holes_match &&
                after.component_count() == 1 && secs < kTopologySeconds,
            fmt("before: holes %ld vs %zu (match %d); after: components %d holes %d, %zu component(s), %d bridges; "
                "%.2f s",
                pre.roadmap_holes, pre.cspace_holes, pre.holes_match, post.components_match, post.holes_match,
                after.component_count(), rep.bridges_added, secs)};
}

struct CellSet {
    std::vector<BenchRow> rows;
};

CellSet run_cells(Run& run, const Environment& env, const std::string& heuristic, int n, int seeds,
                  const SolverConfig& solver, const std::string& tag) {
    BenchConfig cfg;
    cfg.plan.solver = solver;
    cfg.plan.budget.max_seconds = kInstanceSeconds;
    CellSet out;
    for (int s = 0; s < seeds; ++s) {
        Instance inst;
        PlanResult res;
        BenchRow row = bench_cell(env, "empty", n, heuristic, static_cast<std::uint64_t>(s), cfg, &inst, &res);
        run.record.text << tag << " " << bench_csv_row(row, false) << "\n";
        if (row.status == "ok") {
            run.record.text << plan_to_json(res.plan, res.report).dump() << "\n";
            run.plans.push_back({fmt("%s n=%d %s seed %d", tag.c_str(), n, heuristic.c_str(), s), env, inst, res.plan,
                                 res.report.step_duration});
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

Outcome desk_scale(Run& run) {
    const Environment env = suite_environment("empty");
    int solved = 0, total = 0, slow = 0;
    double ratio_sum = 0.0, worst_time = 0.0;
    std::string per_n;
    for (int n : {10, 20, 30}) {
        const CellSet cells = run_cells(run, env, "auto", n, 10, SolverConfig{}, "desk");
        int ok_n = 0;
        double sum_n = 0.0;
        for (const auto& r : cells.rows) {
            ++total;
            worst_time = std::max(worst_time, r.runtime_s);
            if (r.status != "ok") continue;
            if (r.runtime_s > kInstanceSeconds) {
                ++slow;
                continue;
            }
            ++solved;
            ++ok_n;
            ratio_sum += r.ratio;
            sum_n += r.ratio;
        }
        per_n += fmt(" n=%d: %d/10 ratio %.3f;", n, ok_n, ok_n ? sum_n / ok_n : 0.0);
    }
    const double mean = solved ? ratio_sum / solved : 0.0;
    bool ok = solved >= kSolvedFraction * total && mean >= 1.0 && mean <= kRatioMax;
    std::string detail = fmt("bundled: %d/%d solved within %.0f s (slowest %.2f s), mean ratio %.3f;", solved, total,
                             kInstanceSeconds, worst_time, mean) +
                         per_n;

    if (run.external.empty()) {
        detail += " external solver unavailable, n=50 check not run";
        return {false, detail};
    }
    // External solver at n=50. Seeds whose endpoints cannot be snapped are
    // skipped and counted.
    int done = 0, snap_skipped = 0, external_failed = 0;
    double ext_worst = 0.0;
    std::string ext_seeds;
    BenchConfig cfg;
    cfg.plan.solver = SolverConfig::parse(run.external);
    cfg.plan.budget.max_seconds = kInstanceSeconds;
    for (int s = 0; s < kExternalSeedLimit && done < kExternalInstances; ++s) {
        Instance inst;
        PlanResult res;
        const BenchRow row = bench_cell(env, "empty", 50, "auto", static_cast<std::uint64_t>(s), cfg, &inst, &res);
        run.record.text << "external " << bench_csv_row(row, false) << "\n";
        if (row.status == "snap_failure") {
            ++snap_skipped;
            continue;
        }
        ++done;
        if (row.status != "ok" || row.ratio > kRatioMax) {
            ++external_failed;
            ext_seeds += fmt(" seed %d %s", s, row.status.c_str());
            continue;
        }
        run.record.text << plan_to_json(res.plan, res.report).dump() << "\n";
        run.plans.push_back({fmt("external n=50 seed %d", s), env, inst, res.plan, res.report.step_duration});
        ext_worst = std::max(ext_worst, row.ratio);
        ext_seeds += fmt(" seed %d ratio %.3f (%.1f s)", s, row.ratio, row.runtime_s);
    }
    ok = ok && done == kExternalInstances && external_failed == 0;
    detail += fmt(" external n=50: %d/%d solved, worst ratio %.3f, %d seed(s) skipped for snap failure;%s",
                  done - external_failed, kExternalInstances, ext_worst, snap_skipped, ext_seeds.c_str());
    return {ok, detail};
}

Outcome split_speedup(Run& run) {
    const Environment env = suite_environment("empty");
    const CellSet base = run_cells(run, env, "baseline", 30, 10, SolverConfig{}, "speedup");
    const CellSet two = run_cells(run, env, "2-way", 30, 10, SolverConfig{}, "speedup");
    double tb = 0, t2 = 0, vb = 0, v2 = 0, worst_frac = 0;
    int pairs = 0;
    for (std::size_t i = 0; i < base.rows.size(); ++i) {
        const auto& b = base.rows[i];
        const auto& t = two.rows[i];
        if (b.status != "ok" || t.status != "ok") continue;
        ++pairs;
        tb += b.runtime_s;
        t2 += t.runtime_s;
        vb += b.vars;
        v2 += t.vars;
        worst_frac = std::max(worst_frac, static_cast<double>(t.vars) / b.vars);
    }
    const bool ok = pairs == 10 && t2 < tb && v2 <= kSubModelFraction * vb;
    return {ok, fmt("%d paired instances; mean runtime 2-way %.4f s vs baseline %.4f s; mean largest sub-model %.0f vs "
                    "%.0f variables (%.3f, worst instance %.3f)",
                    pairs, t2 / std::max(1, pairs), tb / std::max(1, pairs), v2 / std::max(1, pairs),
                    vb / std::max(1, pairs), vb > 0 ? v2 / vb : 0.0, worst_frac)};
}

Outcome safety(const Run& run) {
    int bad = 0;
    std::string first;
    for (const auto& item : run.plans) {
        std::string why = check_safety(item);
        const CSpace cs = compute_cspace(item.env, item.env.robot_radius);
        if (why.empty())
            if (auto v = validate_plan(item.plan, item.inst, cs, item.step)) why = "validator: " + v->message;
        if (!why.empty()) {
            ++bad;
            if (first.empty()) first = " first: " + item.label + ": " + why;
        }
    }
    return {bad == 0 && !run.plans.empty(),
            fmt("%zu plans checked, %d violation(s)%s", run.plans.size(), bad, first.c_str())};
}

std::string find_external() {
    if (const char* env = std::getenv("HEXAPLAN_SOLVER"); env && *env) return env;
    if (std::system("python3 -c 'import highspy' >/dev/null 2>&1") != 0) return "";
    return std::string("external:python3 ") + HEXAPLAN_SOURCE_DIR + "/tools/highs_solve.py";
}

void print(int id, const Outcome& o) {
    std::printf("criterion %2d %s: %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
}

}  // namespace

int main() {
    std::vector<Outcome> out(11);
    Run first, second;
    first.external = second.external = find_external();

    out[1] = tiling_densities();
    print(1, out[1]);
    out[2] = side_lengths();
    print(2, out[2]);

    auto deterministic = [](Run& run, std::vector<Outcome>* keep) {
        const std::function<Outcome(Run&)> steps[] = {fig7, oracle_equivalence, stretch,
                                                      [](Run&) { return topology(); }, desk_scale, split_speedup};
        for (int k = 0; k < 6; ++k) {
            Outcome o;
            try {
                o = steps[k](run);
            } catch (const std::exception& e) {
                o = {false, std::string("threw: ") + e.what()};
            }
            run.record.text << "criterion " << k + 3 << " " << o.pass << "\n";
            if (keep) {
                (*keep)[static_cast<std::size_t>(k + 3)] = o;
                print(k + 3, o);
            }
        }
    };
    deterministic(first, &out);
    out[9] = safety(first);
    print(9, out[9]);

    deterministic(second, nullptr);
    const std::string a = first.record.text.str(), b = second.record.text.str();
    std::size_t diff = 0;
    while (diff < a.size() && diff < b.size() && a[diff] == b[diff]) ++diff;
    out[10] = {a == b, a == b ? fmt("criteria 3-8 rerun: %zu bytes of plans and CSV rows identical", a.size())
                              : fmt("reruns differ at byte %zu of %zu", diff, a.size())};
    print(10, out[10]);

    int failed = 0;
    for (int id = 1; id <= 10; ++id) failed += !out[static_cast<std::size_t>(id)].pass;
    std::printf("%d of 10 criteria passed\n", 10 - failed);
    return failed == 0 ? 0 : 1;
}
