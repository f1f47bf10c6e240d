#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include "hexaplan/error.hpp"
#include "hexaplan/geometry.hpp"

namespace hexaplan {

namespace {

std::string ring_label(int hole) {
    return hole < 0 ? std::string("outer boundary") : "hole " + std::to_string(hole);
}

// Drops an explicit closing vertex and rejects the degenerate cases.
Ring clean_ring(Ring ring, int hole) {
    if (ring.size() >= 2 && ring.front() == ring.back()) ring.pop_back();
    if (ring.size() < 3)
        throw Error(ErrorKind::input, ring_label(hole) + ": needs at least 3 vertices");
    for (std::size_t i = 0; i < ring.size(); ++i) {
        const Point a = ring[i];
        const Point b = ring[(i + 1) % ring.size()];
        if (!std::isfinite(a.x) || !std::isfinite(a.y))
            throw Error(ErrorKind::input, ring_label(hole) + ": non-finite coordinate");
        if (distance(a, b) <= kGeomTol)
            throw Error(ErrorKind::input,
                        ring_label(hole) + ": duplicate consecutive vertex at index " +
                            std::to_string((i + 1) % ring.size()));
    }
    if (std::abs(signed_area(ring)) <= kGeomTol)
        throw Error(ErrorKind::input, ring_label(hole) + ": zero area");
    if (!is_simple(ring)) throw Error(ErrorKind::input, ring_label(hole) + ": not simple");
    return ring;
}

bool rings_touch(const Ring& r, const Ring& s) {
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j)
            if (segments_intersect(r[i], r[(i + 1) % r.size()], s[j], s[(j + 1) % s.size()]))
                return true;
    return false;
}

Ring parse_ring(const nlohmann::json& j, int hole) {
    if (!j.is_array()) throw Error(ErrorKind::input, ring_label(hole) + ": expected an array");
    Ring ring;
    ring.reserve(j.size());
    for (const auto& p : j) ring.push_back(point_from_json(p));
    return ring;
}

}  // namespace

Environment make_environment(Ring outer, std::vector<Ring> holes, double robot_radius) {
    if (!(robot_radius >= 0.0) || !std::isfinite(robot_radius))
        throw Error(ErrorKind::input, "robot_radius must be a finite number >= 0");

    Environment env;
    env.robot_radius = robot_radius;
    env.outer = clean_ring(std::move(outer), -1);
    if (signed_area(env.outer) < 0.0) std::reverse(env.outer.begin(), env.outer.end());

    for (std::size_t h = 0; h < holes.size(); ++h) {
        Ring ring = clean_ring(std::move(holes[h]), static_cast<int>(h));
        if (signed_area(ring) > 0.0) std::reverse(ring.begin(), ring.end());
        for (const Point& p : ring)
            if (classify_point(env.outer, p) != 1)
                throw Error(ErrorKind::input,
                            ring_label(static_cast<int>(h)) + ": not strictly inside the outer boundary");
        if (rings_touch(ring, env.outer))
            throw Error(ErrorKind::input,
                        ring_label(static_cast<int>(h)) + ": touches the outer boundary");
        for (std::size_t g = 0; g < env.holes.size(); ++g) {
            const Ring& other = env.holes[g];
            if (rings_touch(ring, other) || classify_point(other, ring[0]) != -1 ||
                classify_point(ring, other[0]) != -1)
                throw Error(ErrorKind::input, ring_label(static_cast<int>(h)) + " and " +
                                                  ring_label(static_cast<int>(g)) + " overlap");
        }
        env.holes.push_back(std::move(ring));
    }
    return env;
}

Environment environment_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("outer"))
        throw Error(ErrorKind::input, "environment: expected an object with an \"outer\" polygon");
    Ring outer = parse_ring(doc.at("outer"), -1);
    std::vector<Ring> holes;
    if (doc.contains("holes")) {
        const auto& hs = doc.at("holes");
        if (!hs.is_array()) throw Error(ErrorKind::input, "environment: \"holes\" must be an array");
        for (std::size_t h = 0; h < hs.size(); ++h)
            holes.push_back(parse_ring(hs[h], static_cast<int>(h)));
    }
    double radius = 1.0;
    if (doc.contains("robot_radius")) {
        if (!doc.at("robot_radius").is_number())
            throw Error(ErrorKind::input, "environment: robot_radius must be a number");
        radius = doc.at("robot_radius").get<double>();
    }
    return make_environment(std::move(outer), std::move(holes), radius);
}

Environment load_environment(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::input, "cannot open environment file " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::input, path + ": " + e.what());
    }
    return environment_from_json(doc);
}

std::size_t Environment::complexity() const {
    std::size_t m = outer.size();
    for (const Ring& h : holes) m += h.size();
    return m;
}

Bbox Environment::bbox() const { return bbox_of(outer); }

bool Environment::in_workspace(Point p) const {
    if (classify_point(outer, p) < 0) return false;
    for (const Ring& h : holes)
        if (classify_point(h, p) > 0) return false;
    return true;
}

double Environment::clearance(Point p) const {
    double d = std::numeric_limits<double>::infinity();
    auto scan = [&](const Ring& ring) {
        for (std::size_t i = 0; i < ring.size(); ++i)
            d = std::min(d, point_segment_distance(p, ring[i], ring[(i + 1) % ring.size()]));
    };
    scan(outer);
    for (const Ring& h : holes) scan(h);
    return in_workspace(p) ? d : -d;
}

nlohmann::json Environment::to_json() const {
    auto ring_json = [](const Ring& r) {
        nlohmann::json arr = nlohmann::json::array();
        for (const Point& p : r) arr.push_back(hexaplan::to_json(p));
        return arr;
    };
    nlohmann::json doc;
    doc["outer"] = ring_json(outer);
    doc["holes"] = nlohmann::json::array();
    for (const Ring& h : holes) doc["holes"].push_back(ring_json(h));
    doc["robot_radius"] = robot_radius;
    return doc;
}

}  // namespace hexaplan
