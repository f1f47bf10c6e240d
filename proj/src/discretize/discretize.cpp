#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "hexaplan/discretize.hpp"
#include "hexaplan/error.hpp"

namespace hexaplan {

namespace {

std::vector<Point> parse_points(const nlohmann::json& doc, const char* key) {
    if (!doc.contains(key) || !doc[key].is_array())
        throw Error(ErrorKind::input, std::string("instance needs an array '") + key + "'");
    std::vector<Point> out;
    for (const auto& p : doc[key]) out.push_back(point_from_json(p));
    return out;
}

constexpr double kSlack = 1e-9;
constexpr std::size_t kSnapRetries = 4;  // passes per robot before giving up


// Greedy assignment in the given order. Returns the first robot left
// without a node, or -1 when everyone got one.
int snap_pass(const std::vector<Point>& points, const std::vector<int>& order, const Roadmap& rm, const CSpace& cs,
              const std::vector<int>& lattice_nodes, double clear, double radius, std::vector<SnapSegment>& out) {
    const std::size_t n = points.size();
    std::vector<char> taken(rm.nodes.size(), 0);
    std::vector<int> done;
    for (int i : order) {
        const Point p = points[static_cast<std::size_t>(i)];
        std::vector<std::pair<double, int>> cand;
        for (int v : lattice_nodes) {
            const double d = distance(p, rm.nodes[static_cast<std::size_t>(v)]);
            if (d <= radius) cand.emplace_back(d, v);
        }
        std::sort(cand.begin(), cand.end());
        int chosen = -1;
        for (const auto& [d, v] : cand) {
            if (taken[static_cast<std::size_t>(v)]) continue;
            const Point q = rm.nodes[static_cast<std::size_t>(v)];
            bool ok = true;
            // Everyone else is parked at their endpoint or at a claimed node.
            for (std::size_t j = 0; j < n && ok; ++j)
                if (static_cast<int>(j) != i && point_segment_distance(points[j], p, q) < clear) ok = false;
            for (int k : done) {
                if (!ok) break;
                const Point w = rm.nodes[static_cast<std::size_t>(out[static_cast<std::size_t>(k)].node)];
                if (point_segment_distance(w, p, q) < clear) ok = false;
                if (point_segment_distance(q, points[static_cast<std::size_t>(k)], w) < clear) ok = false;
            }
            if (ok && !segment_free(cs, p, q)) ok = false;
            if (ok) {
                chosen = v;
                break;
            }
        }
        if (chosen < 0) return i;
        taken[static_cast<std::size_t>(chosen)] = 1;
        out[static_cast<std::size_t>(i)] = {p, chosen};
        done.push_back(i);
    }
    return -1;
}

// One side (starts or goals) of snapping. `points` are the continuous
// endpoints, the result holds one node per robot.
std::vector<SnapSegment> snap_side(const std::vector<Point>& points, const Roadmap& rm, const CSpace& cs, bool goals) {
    const std::size_t n = points.size();
    const double clear = 2.0 * cs.robot_radius() - kSlack;
    const double radius = 2.0 * rm.side + kSlack;
    const char* what = goals ? "goal" : "start";

    std::vector<int> lattice_nodes;
    for (std::size_t v = 0; v < rm.nodes.size(); ++v)
        if (rm.is_lattice_node(static_cast<int>(v))) lattice_nodes.push_back(static_cast<int>(v));
    if (lattice_nodes.empty()) throw Error(ErrorKind::empty_lattice, "roadmap has no lattice nodes");

    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
        if (!contains_point(cs, points[i]))
            throw Error(ErrorKind::input, std::string(what) + " of robot " + std::to_string(i) + " lies outside the C-space",
                        static_cast<int>(i));
        for (int v : lattice_nodes) nearest[i] = std::min(nearest[i], distance(points[i], rm.nodes[static_cast<std::size_t>(v)]));
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return nearest[a] < nearest[b]; });

    // A robot that finds nothing moves to the front and the pass restarts.
    // A robot failing while already first fails for good.
    std::vector<SnapSegment> out(n);
    for (std::size_t attempt = 0;; ++attempt) {
        const int stuck = snap_pass(points, order, rm, cs, lattice_nodes, clear, radius, out);
        if (stuck < 0) break;
        if (order.front() == stuck || attempt >= kSnapRetries * n)
            throw Error(ErrorKind::snap_failure,
                        "robot " + std::to_string(stuck) + ": no free roadmap node within 2 * side of its " + what,
                        stuck);
        order.erase(std::find(order.begin(), order.end(), stuck));
        order.insert(order.begin(), stuck);
    }
    return out;
}

}  // namespace

nlohmann::json Instance::to_json() const {
    nlohmann::json doc{{"starts", nlohmann::json::array()}, {"goals", nlohmann::json::array()}};
    for (Point p : starts) doc["starts"].push_back(hexaplan::to_json(p));
    for (Point p : goals) doc["goals"].push_back(hexaplan::to_json(p));
    return doc;
}

Instance instance_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw Error(ErrorKind::input, "instance must be a JSON object");
    Instance inst{parse_points(doc, "starts"), parse_points(doc, "goals")};
    if (inst.starts.size() != inst.goals.size())
        throw Error(ErrorKind::input, "instance has " + std::to_string(inst.starts.size()) + " starts but " +
                                          std::to_string(inst.goals.size()) + " goals");
    return inst;
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::input, "cannot open instance file " + path);
    try {
        return instance_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::input, "instance " + path + ": " + e.what());
    }
}

std::vector<AssumptionWarning> validate_assumptions(const Instance& inst, const Environment& env,
                                                    const AssumptionOptions& opts) {
    std::vector<AssumptionWarning> out;
    const double r = env.robot_radius;
    const double sep = opts.min_separation * r;
    auto pairs = [&](const std::vector<Point>& pts, bool goal) {
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                const double d = distance(pts[i], pts[j]);
                if (d >= sep) continue;
                std::ostringstream msg;
                msg << (goal ? "goals" : "starts") << " of robots " << i << " and " << j << " are " << d
                    << " apart (< " << sep << ")";
                out.push_back({goal ? WarningKind::goal_separation : WarningKind::start_separation,
                               static_cast<int>(i), static_cast<int>(j), goal, d, msg.str()});
            }
    };
    pairs(inst.starts, false);
    pairs(inst.goals, true);
    if (!opts.check_clearance) return out;
    const double need = std::sqrt(5.0) * r;
    auto clearance = [&](const std::vector<Point>& pts, bool goal) {
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double c = env.clearance(pts[i]);
            if (c >= need) continue;
            std::ostringstream msg;
            msg << (goal ? "goal" : "start") << " of robot " << i << " has clearance " << c << " (< " << need << ")";
            out.push_back({WarningKind::boundary_clearance, static_cast<int>(i), -1, goal, c, msg.str()});
        }
    };
    clearance(inst.starts, false);
    clearance(inst.goals, true);
    return out;
}

DiscreteInstance make_discrete(const Roadmap& rm, std::vector<int> starts, std::vector<int> goals, double robot_radius) {
    if (starts.size() != goals.size()) throw Error(ErrorKind::input, "start and goal counts differ");
    const int n = static_cast<int>(rm.nodes.size());
    for (auto* list : {&starts, &goals}) {
        std::vector<int> sorted = *list;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw Error(ErrorKind::input, "two robots share a start or goal node");
        for (int v : sorted)
            if (v < 0 || v >= n) throw Error(ErrorKind::input, "node id out of range");
    }
    DiscreteInstance di;
    di.roadmap = &rm;
    di.robot_radius = robot_radius;
    for (std::size_t i = 0; i < starts.size(); ++i) {
        di.prefix.push_back({rm.nodes[static_cast<std::size_t>(starts[i])], starts[i]});
        di.suffix.push_back({rm.nodes[static_cast<std::size_t>(goals[i])], goals[i]});
    }
    di.start_node = std::move(starts);
    di.goal_node = std::move(goals);
    return di;
}

DiscreteInstance snap(const Instance& inst, const Roadmap& rm, const CSpace& cs) {
    if (inst.starts.size() != inst.goals.size()) throw Error(ErrorKind::input, "start and goal counts differ");
    DiscreteInstance di;
    di.roadmap = &rm;
    di.robot_radius = cs.robot_radius();
    di.prefix = snap_side(inst.starts, rm, cs, false);
    di.suffix = snap_side(inst.goals, rm, cs, true);
    for (const auto& s : di.prefix) di.start_node.push_back(s.node);
    for (const auto& s : di.suffix) di.goal_node.push_back(s.node);
    return di;
}

}  // namespace hexaplan
