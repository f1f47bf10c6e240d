#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <set>

#include "hexaplan/error.hpp"
#include "hexaplan/roadmap.hpp"

namespace hexaplan {

const char* to_string(EdgeKind kind) { return kind == EdgeKind::lattice ? "lattice" : "bridge"; }

std::vector<Point> RoadmapEdge::polyline(const std::vector<Point>& nodes) const {
    std::vector<Point> out{nodes[static_cast<std::size_t>(a)]};
    out.insert(out.end(), via.begin(), via.end());
    out.push_back(nodes[static_cast<std::size_t>(b)]);
    return out;
}

int Roadmap::find_edge(int u, int v) const {
    for (const auto& [w, e] : adjacency[static_cast<std::size_t>(u)])
        if (w == v) return e;
    return -1;
}

void Roadmap::rebuild_adjacency() {
    adjacency.assign(nodes.size(), {});
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const int id = static_cast<int>(e);
        adjacency[static_cast<std::size_t>(edges[e].a)].emplace_back(edges[e].b, id);
        adjacency[static_cast<std::size_t>(edges[e].b)].emplace_back(edges[e].a, id);
    }
    for (auto& row : adjacency) std::sort(row.begin(), row.end());
}

std::vector<int> Roadmap::components() const {
    std::vector<int> label(nodes.size(), -1);
    int next = 0;
    for (std::size_t s = 0; s < nodes.size(); ++s) {
        if (label[s] >= 0) continue;
        std::deque<int> open{static_cast<int>(s)};
        label[s] = next;
        while (!open.empty()) {
            const int u = open.front();
            open.pop_front();
            for (const auto& [v, e] : adjacency[static_cast<std::size_t>(u)]) {
                if (label[static_cast<std::size_t>(v)] >= 0) continue;
                label[static_cast<std::size_t>(v)] = next;
                open.push_back(v);
            }
        }
        ++next;
    }
    return label;
}

std::size_t Roadmap::component_count() const {
    const auto label = components();
    return label.empty() ? 0 : static_cast<std::size_t>(*std::max_element(label.begin(), label.end()) + 1);
}

std::vector<int> Roadmap::hops_from(int src) const {
    std::vector<int> hops(nodes.size(), -1);
    std::deque<int> open{src};
    hops[static_cast<std::size_t>(src)] = 0;
    while (!open.empty()) {
        const int u = open.front();
        open.pop_front();
        for (const auto& [v, e] : adjacency[static_cast<std::size_t>(u)]) {
            if (hops[static_cast<std::size_t>(v)] >= 0) continue;
            hops[static_cast<std::size_t>(v)] = hops[static_cast<std::size_t>(u)] + 1;
            open.push_back(v);
        }
    }
    return hops;
}

std::vector<double> Roadmap::distances_from(int src) const { return distances_from({{src, 0.0}}); }

std::vector<double> Roadmap::distances_from(const std::vector<std::pair<int, double>>& sources) const {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(nodes.size(), inf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    for (const auto& [src, d0] : sources) {
        if (d0 < dist[static_cast<std::size_t>(src)]) {
            dist[static_cast<std::size_t>(src)] = d0;
            open.emplace(d0, src);
        }
    }
    while (!open.empty()) {
        const auto [d, u] = open.top();
        open.pop();
        if (d > dist[static_cast<std::size_t>(u)]) continue;
        for (const auto& [v, e] : adjacency[static_cast<std::size_t>(u)]) {
            const double nd = d + edges[static_cast<std::size_t>(e)].length;
            if (nd < dist[static_cast<std::size_t>(v)]) {
                dist[static_cast<std::size_t>(v)] = nd;
                open.emplace(nd, v);
            }
        }
    }
    return dist;
}

double roadmap_path_length(const Roadmap& rm, const CSpace& cs, Point a, Point b, double reach) {
    auto entries = [&](Point p) {
        std::vector<std::pair<int, double>> out;
        for (int v = 0; v < static_cast<int>(rm.node_count()); ++v) {
            const double d = distance(p, rm.nodes[static_cast<std::size_t>(v)]);
            if (d <= reach && segment_free(cs, p, rm.nodes[static_cast<std::size_t>(v)])) out.emplace_back(v, d);
        }
        return out;
    };
    const auto dist = rm.distances_from(entries(a));
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [v, d] : entries(b)) best = std::min(best, dist[static_cast<std::size_t>(v)] + d);
    return best;
}

Roadmap roadmap_from_lattice(const Lattice& lat) {
    Roadmap rm;
    rm.side = lat.spec.side;
    std::vector<int> index(lat.nodes.size(), -1);
    for (std::size_t v = 0; v < lat.nodes.size(); ++v) {
        const bool used = std::any_of(lat.node_edges[v].begin(), lat.node_edges[v].end(),
                                      [&](int e) { return lat.is_free(e); });
        if (!used) continue;
        index[v] = static_cast<int>(rm.nodes.size());
        rm.nodes.push_back(lat.nodes[v]);
        rm.lattice_node.push_back(static_cast<int>(v));
    }
    for (std::size_t e = 0; e < lat.edges.size(); ++e) {
        if (!lat.is_free(static_cast<int>(e))) continue;
        RoadmapEdge edge;
        edge.a = index[static_cast<std::size_t>(lat.edges[e][0])];
        edge.b = index[static_cast<std::size_t>(lat.edges[e][1])];
        edge.length = distance(rm.nodes[static_cast<std::size_t>(edge.a)], rm.nodes[static_cast<std::size_t>(edge.b)]);
        rm.edges.push_back(std::move(edge));
    }
    for (std::size_t c = 0; c < lat.cells.size(); ++c) {
        const auto& sides = lat.cell_edges[c];
        if (!std::all_of(sides.begin(), sides.end(), [&](int e) { return lat.is_free(e); })) continue;
        std::vector<int> ring;
        for (int v : lat.cells[c]) ring.push_back(index[static_cast<std::size_t>(v)]);
        rm.faces.push_back(std::move(ring));
    }
    rm.rebuild_adjacency();
    return rm;
}

Roadmap roadmap_from_graph(std::vector<Point> nodes, const std::vector<std::array<int, 2>>& edges,
                           double side) {
    Roadmap rm;
    rm.side = side;
    rm.nodes = std::move(nodes);
    const int n = static_cast<int>(rm.nodes.size());
    for (int v = 0; v < n; ++v) rm.lattice_node.push_back(v);
    std::set<std::pair<int, int>> seen;
    for (const auto& [a, b] : edges) {
        if (a < 0 || b < 0 || a >= n || b >= n || a == b)
            throw Error(ErrorKind::input, "bad roadmap edge " + std::to_string(a) + "-" + std::to_string(b));
        if (!seen.insert({std::min(a, b), std::max(a, b)}).second)
            throw Error(ErrorKind::input, "repeated roadmap edge " + std::to_string(a) + "-" + std::to_string(b));
        RoadmapEdge edge;
        edge.a = a;
        edge.b = b;
        edge.length = distance(rm.nodes[static_cast<std::size_t>(a)], rm.nodes[static_cast<std::size_t>(b)]);
        rm.edges.push_back(std::move(edge));
    }
    rm.rebuild_adjacency();
    return rm;
}

EnclosingCycle enclosing_cycle(const Lattice& lat, const Ring& obstacle) {
    EnclosingCycle out;
    const RingTrace trace = trace_ring(lat, obstacle);
    std::vector<char> member(lat.cells.size(), 0);
    for (int c : trace.cells) member[static_cast<std::size_t>(c)] = 1;
    const Bbox box = bbox_of(obstacle);
    for (std::size_t c = 0; c < lat.cells.size(); ++c) {
        if (member[c]) continue;
        const Point p = lat.cell_center(static_cast<int>(c));
        if (p.x < box.lo.x || p.x > box.hi.x || p.y < box.lo.y || p.y > box.hi.y) continue;
        if (classify_point(obstacle, p) > 0) member[c] = 1;
    }
    for (std::size_t c = 0; c < lat.cells.size(); ++c)
        if (member[c]) out.cells.push_back(static_cast<int>(c));

    // Directed boundary edges keep the covered cell on their left.
    std::multimap<int, std::pair<int, int>> outgoing;  // from -> (to, edge)
    for (int c : out.cells) {
        const auto& ring = lat.cells[static_cast<std::size_t>(c)];
        const auto& sides = lat.cell_edges[static_cast<std::size_t>(c)];
        for (std::size_t i = 0; i < ring.size(); ++i) {
            const int nb = lat.neighbor_across(c, sides[i]);
            if (nb >= 0 && member[static_cast<std::size_t>(nb)]) continue;
            outgoing.emplace(ring[i], std::make_pair(ring[(i + 1) % ring.size()], sides[i]));
        }
    }

    std::vector<std::vector<int>> loops;
    std::vector<std::vector<int>> loop_edges;
    while (!outgoing.empty()) {
        std::vector<int> loop;
        std::vector<int> used;
        auto it = outgoing.begin();
        const int start = it->first;
        int at = start;
        while (true) {
            auto found = outgoing.find(at);
            if (found == outgoing.end()) break;
            loop.push_back(at);
            used.push_back(found->second.second);
            at = found->second.first;
            outgoing.erase(found);
            if (at == start) break;
        }
        loops.push_back(std::move(loop));
        loop_edges.push_back(std::move(used));
    }
    if (loops.empty()) return out;

    std::size_t best = 0;
    double best_area = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < loops.size(); ++i) {
        Ring ring;
        for (int v : loops[i]) ring.push_back(lat.nodes[static_cast<std::size_t>(v)]);
        const double a = signed_area(ring);
        if (a > best_area) best_area = a, best = i;
    }
    out.nodes = loops[best];
    for (int e : loop_edges[best]) {
        const auto& cells = lat.edge_cells[static_cast<std::size_t>(e)];
        if (cells[1] < 0 || lat.state[static_cast<std::size_t>(e)] == EdgeState::outside) out.open_boundary = true;
    }
    return out;
}

TopologyReport verify_topology(const Roadmap& rm, const CSpace& cs) {
    TopologyReport r;
    r.roadmap_components = rm.component_count();
    r.cspace_components = cs.component_count();
    r.cspace_holes = cs.hole_count();
    // Cycle rank E - V + C, minus one per contracted free cell.
    r.roadmap_holes = static_cast<long>(rm.edges.size()) - static_cast<long>(rm.nodes.size()) +
                      static_cast<long>(r.roadmap_components) - static_cast<long>(rm.faces.size());
    r.components_match = r.roadmap_components == r.cspace_components;
    r.holes_match = r.roadmap_holes == static_cast<long>(r.cspace_holes);
    return r;
}

std::vector<ExclusionZone> exclusion_zones(const Roadmap& rm, double robot_radius) {
    const double reach = 2.0 * robot_radius + 1e-9;
    std::vector<ExclusionZone> zones;
    for (const BridgeGroup& g : rm.groups) {
        ExclusionZone z;
        z.group = g.id;
        z.bridge_edges = g.edges;
        z.interior_nodes.assign(g.nodes.begin() + 1, g.nodes.end() - 1);
        const std::vector<Point>& path = g.polyline;
        auto near_point = [&](Point p) {
            for (std::size_t i = 0; i + 1 < path.size(); ++i)
                if (point_segment_distance(p, path[i], path[i + 1]) <= reach) return true;
            return path.size() == 1 && distance(p, path[0]) <= reach;
        };
        for (std::size_t v = 0; v < rm.nodes.size(); ++v) {
            const int id = static_cast<int>(v);
            if (std::find(z.interior_nodes.begin(), z.interior_nodes.end(), id) != z.interior_nodes.end()) continue;
            if (near_point(rm.nodes[v])) z.near_nodes.push_back(id);
        }
        const Bbox box = bbox_of(path);
        for (std::size_t e = 0; e < rm.edges.size(); ++e) {
            if (rm.edges[e].group == g.id) continue;
            const std::vector<Point> poly = rm.edges[e].polyline(rm.nodes);
            const Bbox eb = bbox_of(poly);
            if (eb.lo.x > box.hi.x + reach || eb.hi.x < box.lo.x - reach || eb.lo.y > box.hi.y + reach ||
                eb.hi.y < box.lo.y - reach)
                continue;
            bool hit = false;
            for (std::size_t i = 0; i + 1 < poly.size() && !hit; ++i)
                for (std::size_t j = 0; j + 1 < path.size() && !hit; ++j)
                    hit = segment_segment_distance(poly[i], poly[i + 1], path[j], path[j + 1]) <= reach;
            if (hit) z.near_edges.push_back(static_cast<int>(e));
        }
        zones.push_back(std::move(z));
    }
    return zones;
}

nlohmann::json roadmap_to_json(const Roadmap& rm) {
    nlohmann::json doc;
    doc["side"] = rm.side;
    doc["nodes"] = nlohmann::json::array();
    for (std::size_t v = 0; v < rm.nodes.size(); ++v) doc["nodes"].push_back({v, rm.nodes[v].x, rm.nodes[v].y});
    doc["edges"] = nlohmann::json::array();
    for (const RoadmapEdge& e : rm.edges) {
        nlohmann::json j{{"a", e.a}, {"b", e.b}, {"kind", to_string(e.kind)}, {"group", e.group}};
        if (!e.via.empty()) {
            j["via"] = nlohmann::json::array();
            for (Point p : e.via) j["via"].push_back(to_json(p));
        }
        doc["edges"].push_back(std::move(j));
    }
    return doc;
}

}  // namespace hexaplan
