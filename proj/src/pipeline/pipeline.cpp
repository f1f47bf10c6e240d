#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "hexaplan/error.hpp"
#include "hexaplan/kernels.hpp"
#include "hexaplan/pipeline.hpp"

namespace hexaplan {

namespace {

constexpr double kClearanceSlack = 1e-6;
constexpr double kSpeedSlack = 1e-9;
constexpr int kSamplesPerStep = 100;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void push(std::vector<Breakpoint>& traj, double t, Point p) {
    if (!traj.empty() && traj.back().t == t && traj.back().p == p) return;
    traj.push_back({t, p});
}

// Drops breakpoints in the middle of a stationary run.
void compress(std::vector<Breakpoint>& traj) {
    if (traj.size() < 3) return;
    std::vector<Breakpoint> out{traj.front()};
    for (std::size_t k = 1; k + 1 < traj.size(); ++k) {
        if (out.back().p == traj[k].p && traj[k + 1].p == traj[k].p) continue;
        out.push_back(traj[k]);
    }
    out.push_back(traj.back());
    traj = std::move(out);
}

struct Move {
    Point from;
    Point to;
    double length = 0.0;
};

// Delays (relative to the phase start) so that concurrent straight moves stay
// 2r apart. Robots are placed in index order at the earliest clear candidate
// time; the last candidate runs the move after everyone else, which is clear
// whenever snapping kept each segment away from the other robots' rest points.
std::vector<double> schedule_moves(const std::vector<Move>& moves, double radius, bool* serialized) {
    const std::size_t n = moves.size();
    std::vector<double> delay(n, 0.0);
    auto traj = [&](std::size_t i) {
        std::vector<Breakpoint> t{{0.0, moves[i].from}};
        if (delay[i] > 0.0) t.push_back({delay[i], moves[i].from});
        t.push_back({delay[i] + moves[i].length, moves[i].to});
        return t;
    };
    auto extend = [](std::vector<Breakpoint> t, double horizon) {
        if (t.back().t < horizon) t.push_back({horizon, t.back().p});
        return t;
    };
    *serialized = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (moves[i].length == 0.0) continue;
        std::vector<double> candidates{0.0};
        for (std::size_t j = 0; j < i; ++j)
            if (moves[j].length > 0.0) candidates.push_back(delay[j] + moves[j].length);
        std::sort(candidates.begin(), candidates.end());
        const double last = candidates.back();
        for (double c : candidates) {
            delay[i] = c;
            bool clear = true;
            for (std::size_t j = 0; j < n && clear; ++j) {
                if (j == i || (j > i && moves[j].length > 0.0)) continue;
                const double horizon = std::max(delay[i] + moves[i].length, delay[j] + moves[j].length);
                clear = min_separation(extend(traj(i), horizon), extend(traj(j), horizon)) >= 2.0 * radius;
            }
            if (clear || c == last) break;
        }
        if (delay[i] > 0.0) *serialized = true;
    }
    return delay;
}

}  // namespace

Point ContinuousPlan::position(std::size_t i, double t) const {
    const auto& tr = trajectories[i];
    if (t <= tr.front().t) return tr.front().p;
    if (t >= tr.back().t) return tr.back().p;
    auto it = std::upper_bound(tr.begin(), tr.end(), t, [](double x, const Breakpoint& b) { return x < b.t; });
    const Breakpoint& b = *it;
    const Breakpoint& a = *(it - 1);
    if (b.t == a.t) return b.p;
    return lerp(a.p, b.p, (t - a.t) / (b.t - a.t));
}

double min_separation(const std::vector<Breakpoint>& a, const std::vector<Breakpoint>& b, double* at) {
    const double lo = std::max(a.front().t, b.front().t), hi = std::min(a.back().t, b.back().t);
    std::vector<double> times;
    for (const auto& x : a)
        if (x.t >= lo && x.t <= hi) times.push_back(x.t);
    for (const auto& x : b)
        if (x.t >= lo && x.t <= hi) times.push_back(x.t);
    times.push_back(lo);
    times.push_back(hi);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    ContinuousPlan tmp;
    tmp.trajectories = {a, b};
    double best = std::numeric_limits<double>::infinity(), when = lo;
    auto consider = [&](double t, Point d) {
        const double v = norm(d);
        if (v < best) {
            best = v;
            when = t;
        }
    };
    for (std::size_t k = 0; k + 1 < times.size(); ++k) {
        const double t0 = times[k], t1 = times[k + 1];
        // Sample just inside the interval so zero-length jumps are skipped.
        const Point d0 = tmp.position(0, t0) - tmp.position(1, t0);
        const Point d1 = tmp.position(0, t1) - tmp.position(1, t1);
        const Point w = d1 - d0;
        const double ww = dot(w, w);
        double s = 0.0;
        if (ww > 0.0) s = std::clamp(-dot(d0, w) / ww, 0.0, 1.0);
        consider(t0 + s * (t1 - t0), d0 + s * w);
        consider(t1, d1);
    }
    if (times.size() == 1) consider(lo, tmp.position(0, lo) - tmp.position(1, lo));
    if (at) *at = when;
    return best;
}

ContinuousPlan lift(const DiscreteInstance& di, const DiscretePlan& dp, double robot_radius, PlanReport* report) {
    if (!di.roadmap) throw Error(ErrorKind::internal, "discrete instance without a roadmap");
    const Roadmap& rm = *di.roadmap;
    const std::size_t n = di.size();
    const double step = rm.side;
    auto node = [&](int v) { return rm.nodes[static_cast<std::size_t>(v)]; };

    std::vector<Move> pre(n), post(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Point s = di.prefix.empty() ? node(di.start_node[i]) : di.prefix[i].point;
        const Point g = di.suffix.empty() ? node(di.goal_node[i]) : di.suffix[i].point;
        pre[i] = {s, node(di.start_node[i]), distance(s, node(di.start_node[i]))};
        post[i] = {node(di.goal_node[i]), g, distance(node(di.goal_node[i]), g)};
    }
    bool pre_serial = false, post_serial = false;
    const auto pre_delay = schedule_moves(pre, robot_radius, &pre_serial);
    const auto post_delay = schedule_moves(post, robot_radius, &post_serial);
    double A = 0.0, C = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        A = std::max(A, pre_delay[i] + pre[i].length);
        C = std::max(C, post_delay[i] + post[i].length);
    }
    const double B = dp.makespan_steps * step;

    ContinuousPlan plan;
    plan.t_f = A + B + C;
    plan.trajectories.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
        auto& tr = plan.trajectories[i];
        push(tr, 0.0, pre[i].from);
        push(tr, pre_delay[i], pre[i].from);
        push(tr, pre_delay[i] + pre[i].length, pre[i].to);
        const auto& path = dp.paths[i];
        for (int t = 0; t < dp.makespan_steps; ++t) {
            const int u = path[static_cast<std::size_t>(t)], v = path[static_cast<std::size_t>(t + 1)];
            if (u == v) continue;
            const int e = rm.find_edge(u, v);
            if (e < 0) throw Error(ErrorKind::internal, "discrete plan uses a missing edge");
            const RoadmapEdge& edge = rm.edges[static_cast<std::size_t>(e)];
            auto poly = edge.polyline(rm.nodes);
            if (edge.a != u) std::reverse(poly.begin(), poly.end());
            double total = 0.0;
            for (std::size_t k = 1; k < poly.size(); ++k) total += distance(poly[k - 1], poly[k]);
            const double t0 = A + t * step;
            push(tr, t0, poly.front());
            double run = 0.0;
            for (std::size_t k = 1; k < poly.size(); ++k) {
                run += distance(poly[k - 1], poly[k]);
                const double when = k + 1 == poly.size() ? A + (t + 1) * step : t0 + run / total * step;
                push(tr, when, poly[k]);
            }
        }
        push(tr, A + B, post[i].from);
        push(tr, A + B + post_delay[i], post[i].from);
        push(tr, A + B + post_delay[i] + post[i].length, post[i].to);
        push(tr, plan.t_f, post[i].to);
        compress(tr);
    }
    if (report) {
        report->step_duration = step;
        report->prefix_time = A;
        report->suffix_time = C;
        report->makespan_steps = dp.makespan_steps;
        report->t_f = plan.t_f;
        report->serialized_prefix = pre_serial;
        report->serialized_suffix = post_serial;
    }
    return plan;
}

std::optional<Violation> validate_plan(const ContinuousPlan& plan, const Instance& inst, const CSpace& cs,
                                       double step_duration) {
    const std::size_t n = inst.size();
    const double radius = cs.robot_radius();
    auto fail = [](ViolationKind kind, int a, int b, double t, double value, std::string msg) {
        return Violation{kind, a, b, t, value, std::move(msg)};
    };
    if (plan.size() != n)
        return fail(ViolationKind::shape, -1, -1, 0.0, 0.0, "plan has " + std::to_string(plan.size()) + " robots");
    for (std::size_t i = 0; i < n; ++i) {
        const auto& tr = plan.trajectories[i];
        const int r = static_cast<int>(i);
        if (tr.empty() || tr.front().t != 0.0)
            return fail(ViolationKind::shape, r, -1, 0.0, 0.0, "robot " + std::to_string(i) + " does not start at time 0");
        if (distance(tr.front().p, inst.starts[i]) > kGeomTol)
            return fail(ViolationKind::endpoint, r, -1, 0.0, 0.0, "robot " + std::to_string(i) + " starts off its start");
        if (distance(tr.back().p, inst.goals[i]) > kGeomTol)
            return fail(ViolationKind::endpoint, r, -1, tr.back().t, 0.0,
                        "robot " + std::to_string(i) + " ends off its goal");
        if (tr.back().t > plan.t_f + 1e-9)
            return fail(ViolationKind::shape, r, -1, tr.back().t, 0.0, "robot " + std::to_string(i) + " runs past t_f");
        for (std::size_t k = 1; k < tr.size(); ++k) {
            const double dt = tr[k].t - tr[k - 1].t;
            const double len = distance(tr[k - 1].p, tr[k].p);
            if (dt < 0.0 || (dt == 0.0 && len > 0.0) || (dt > 0.0 && len / dt > 1.0 + kSpeedSlack))
                return fail(ViolationKind::speed, r, -1, tr[k - 1].t, dt > 0.0 ? len / dt : INFINITY,
                            "robot " + std::to_string(i) + " too fast at t=" + std::to_string(tr[k - 1].t));
            if (!segment_free(cs, tr[k - 1].p, tr[k].p))
                return fail(ViolationKind::containment, r, -1, tr[k - 1].t, 0.0,
                            "robot " + std::to_string(i) + " leaves the C-space at t=" + std::to_string(tr[k - 1].t));
        }
    }
    if (n < 2) return std::nullopt;
    const double dt = step_duration / kSamplesPerStep;
    const long samples = static_cast<long>(std::ceil(plan.t_f / dt));
    std::vector<double> xs(n), ys(n);
    for (long s = 0; s <= samples; ++s) {
        const double t = std::min(plan.t_f, s * dt);
        for (std::size_t i = 0; i < n; ++i) {
            const Point p = plan.position(i, t);
            xs[i] = p.x;
            ys[i] = p.y;
        }
        const auto hit = kernels::min_pair_dist_sq(xs, ys);
        const double d = std::sqrt(hit.dist_sq);
        if (d < 2.0 * radius - kClearanceSlack)
            return fail(ViolationKind::clearance, static_cast<int>(hit.i), static_cast<int>(hit.j), t, d,
                        "robots " + std::to_string(hit.i) + " and " + std::to_string(hit.j) + " are " +
                            std::to_string(d) + " apart at t=" + std::to_string(t));
    }
    return std::nullopt;
}

double lower_bound(const Instance& inst, const PathFinder& finder) {
    double best = 0.0;
    for (std::size_t i = 0; i < inst.size(); ++i)
        best = std::max(best, finder.shortest_path(inst.starts[i], inst.goals[i]).length);
    return best;
}

double optimality_ratio(const ContinuousPlan& plan, const Instance& inst, const PathFinder& finder) {
    const double lb = lower_bound(inst, finder);
    return lb > 0.0 ? plan.t_f / lb : 1.0;
}

Roadmap build_roadmap(const CSpace& cs, const PathFinder& finder, const PlanConfig& config, double robot_radius,
                      RestoreReport* report) {
    const TilingSpec spec = TilingSpec::minimal(config.tiling, robot_radius, config.epsilon);
    const Lattice lat = impose_lattice(cs, spec, config.offset);
    return restore_connectivity(roadmap_from_lattice(lat), lat, cs, finder, report);
}

PlanResult plan(const Environment& env, const Instance& inst, const PlanConfig& config) {
    PlanResult out;
    PlanReport& rep = out.report;
    const double r = env.robot_radius;

    auto t0 = Clock::now();
    const CSpace cs = compute_cspace(env, r);
    rep.timing.cspace = seconds_since(t0);

    t0 = Clock::now();
    const PathFinder finder(cs);
    RestoreReport restore;
    auto rm = std::make_shared<Roadmap>(build_roadmap(cs, finder, config, r, &restore));
    out.roadmap = rm;
    rep.roadmap_nodes = rm->node_count();
    rep.roadmap_edges = rm->edges.size();
    rep.bridges = restore.bridges_added;
    rep.impassable = restore.impassable.size();
    rep.timing.roadmap = seconds_since(t0);

    t0 = Clock::now();
    for (const auto& w : validate_assumptions(inst, env)) rep.warnings.push_back(w.message);
    out.discrete = snap(inst, *rm, cs);
    rep.timing.snap = seconds_since(t0);

    t0 = Clock::now();
    DiscreteOptions opts;
    opts.solver = config.solver;
    opts.budget = config.budget;
    opts.prune = config.prune;
    rep.lower_T = underestimate_T(out.discrete);
    const int k = config.k > 0 ? config.k : auto_k(rep.lower_T);
    SplitStats st;
    out.discrete_plan = solve_split(out.discrete, k, opts, &st);
    rep.k_requested = st.k_requested;
    rep.k_used = st.k_used;
    for (const auto& s : st.sub) {
        rep.variables = std::max(rep.variables, s.variables);
        rep.constraints = std::max(rep.constraints, s.constraints);
    }
    rep.timing.solve = seconds_since(t0);

    t0 = Clock::now();
    out.plan = lift(out.discrete, out.discrete_plan, r, &rep);
    rep.timing.lift = seconds_since(t0);

    t0 = Clock::now();
    if (auto bad = validate_plan(out.plan, inst, cs, rep.step_duration))
        throw Error(ErrorKind::internal, "plan failed validation: " + bad->message);
    rep.lower_bound = lower_bound(inst, finder);
    rep.optimality_ratio = rep.lower_bound > 0.0 ? out.plan.t_f / rep.lower_bound : 1.0;
    rep.timing.validate = seconds_since(t0);
    return out;
}

nlohmann::json PlanReport::to_json(bool with_timing) const {
    nlohmann::json j = {
        {"t_f", t_f},
        {"lower_bound", lower_bound},
        {"optimality_ratio", optimality_ratio},
        {"step_duration", step_duration},
        {"prefix_time", prefix_time},
        {"suffix_time", suffix_time},
        {"makespan_steps", makespan_steps},
        {"lower_T", lower_T},
        {"k_requested", k_requested},
        {"k_used", k_used},
        {"variables", variables},
        {"constraints", constraints},
        {"roadmap_nodes", roadmap_nodes},
        {"roadmap_edges", roadmap_edges},
        {"bridges", bridges},
        {"impassable_passages", impassable},
        {"serialized_prefix", serialized_prefix},
        {"serialized_suffix", serialized_suffix},
        {"warnings", warnings},
    };
    if (with_timing)
        j["timing"] = {{"cspace", timing.cspace}, {"roadmap", timing.roadmap}, {"snap", timing.snap},
                       {"solve", timing.solve},   {"lift", timing.lift},       {"validate", timing.validate}};
    return j;
}

nlohmann::json plan_to_json(const ContinuousPlan& plan, const PlanReport& report, bool with_timing) {
    nlohmann::json robots = nlohmann::json::array();
    for (std::size_t i = 0; i < plan.size(); ++i) {
        nlohmann::json tr = nlohmann::json::array();
        for (const auto& b : plan.trajectories[i]) tr.push_back({b.t, b.p.x, b.p.y});
        robots.push_back({{"id", i}, {"trajectory", std::move(tr)}});
    }
    return {{"robots", std::move(robots)}, {"t_f", plan.t_f}, {"report", report.to_json(with_timing)}};
}

ContinuousPlan plan_from_json(const nlohmann::json& doc) {
    ContinuousPlan plan;
    try {
        plan.t_f = doc.at("t_f").get<double>();
        for (const auto& robot : doc.at("robots")) {
            std::vector<Breakpoint> tr;
            for (const auto& b : robot.at("trajectory")) {
                if (!b.is_array() || b.size() != 3) throw Error(ErrorKind::input, "breakpoint must be [t, x, y]");
                tr.push_back({b[0].get<double>(), {b[1].get<double>(), b[2].get<double>()}});
            }
            if (tr.empty()) throw Error(ErrorKind::input, "empty trajectory");
            plan.trajectories.push_back(std::move(tr));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::input, std::string("bad plan document: ") + e.what());
    }
    return plan;
}

}  // namespace hexaplan
