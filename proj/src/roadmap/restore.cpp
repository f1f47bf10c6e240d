#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>

#include "hexaplan/error.hpp"
#include "hexaplan/roadmap.hpp"

namespace hexaplan {

namespace {

constexpr int kMaxBridgesPerPair = 4;
constexpr int kJoinCandidates = 16;

struct Obstacle {
    int region = -1;
    int hole = -1;  // -1 for the region's outer ring
    std::vector<char> crossed;
    std::vector<char> member;
};

struct UnionFind {
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x)
            x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        return x;
    }
    void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
    std::vector<int> parent;
};

std::vector<Obstacle> collect_obstacles(const Lattice& lat, const CSpace& cs) {
    std::vector<Obstacle> out;
    std::vector<Point> centers;
    for (std::size_t c = 0; c < lat.cells.size(); ++c) centers.push_back(lat.cell_center(static_cast<int>(c)));
    auto make = [&](int region, int hole, const Ring& ring) {
        Obstacle ob;
        ob.region = region;
        ob.hole = hole;
        ob.crossed.assign(lat.cells.size(), 0);
        for (int c : trace_ring(lat, ring).cells) ob.crossed[static_cast<std::size_t>(c)] = 1;
        ob.member = ob.crossed;
        // The outer ring blocks everything outside it; a hole blocks its inside.
        const int blocked_side = hole < 0 ? -1 : 1;
        for (std::size_t c = 0; c < lat.cells.size(); ++c)
            if (!ob.member[c] && classify_point(ring, centers[c]) == blocked_side) ob.member[c] = 1;
        out.push_back(std::move(ob));
    };
    for (std::size_t r = 0; r < cs.regions().size(); ++r) {
        const auto& region = cs.regions()[r];
        make(static_cast<int>(r), -1, region.outer);
        for (std::size_t h = 0; h < region.holes.size(); ++h)
            make(static_cast<int>(r), static_cast<int>(h), region.holes[h]);
    }
    return out;
}

double polyline_length(const std::vector<Point>& poly) {
    double len = 0.0;
    for (std::size_t i = 0; i + 1 < poly.size(); ++i) len += distance(poly[i], poly[i + 1]);
    return len;
}

// Splits the path into ceil(L / side) equal arc-length pieces so a robot
// covers each piece within one step at unit speed.
void add_bridge(Roadmap& rm, int p, int q, const std::vector<Point>& poly, std::array<int, 2> obstacles,
                RestoreReport& report) {
    const double total = polyline_length(poly);
    const int pieces = std::max(1, static_cast<int>(std::ceil(total / rm.side - 1e-9)));
    const double piece = total / pieces;

    std::vector<double> cum{0.0};
    for (std::size_t i = 0; i + 1 < poly.size(); ++i) cum.push_back(cum.back() + distance(poly[i], poly[i + 1]));
    auto point_at = [&](double s) {
        std::size_t i = 0;
        while (i + 2 < cum.size() && cum[i + 1] < s) ++i;
        const double span = cum[i + 1] - cum[i];
        return span > 0.0 ? lerp(poly[i], poly[i + 1], (s - cum[i]) / span) : poly[i];
    };

    BridgeGroup group;
    group.id = static_cast<int>(rm.groups.size());
    group.polyline = poly;
    group.obstacles = obstacles;
    group.nodes.push_back(p);
    for (int j = 1; j < pieces; ++j) {
        group.nodes.push_back(static_cast<int>(rm.nodes.size()));
        rm.nodes.push_back(point_at(j * piece));
        rm.lattice_node.push_back(-1);
        ++report.bridge_nodes_added;
    }
    group.nodes.push_back(q);

    for (int j = 0; j < pieces; ++j) {
        RoadmapEdge e;
        e.a = group.nodes[static_cast<std::size_t>(j)];
        e.b = group.nodes[static_cast<std::size_t>(j + 1)];
        e.kind = EdgeKind::bridge;
        e.length = piece;
        e.group = group.id;
        const double lo = j * piece, hi = (j + 1) * piece;
        for (std::size_t i = 1; i + 1 < poly.size(); ++i)
            if (cum[i] > lo + 1e-9 && cum[i] < hi - 1e-9) e.via.push_back(poly[i]);
        group.edges.push_back(static_cast<int>(rm.edges.size()));
        rm.edges.push_back(std::move(e));
    }
    rm.groups.push_back(std::move(group));
    rm.rebuild_adjacency();
    ++report.bridges_added;
}

struct BridgeChoice {
    int p = -1;
    int q = -1;
    ContinuousPath path;
};

// Roadmap nodes on or next to the cells both obstacles cover.
std::vector<int> candidate_nodes(const Roadmap& rm, const Lattice& lat, const std::vector<int>& shared,
                                 const std::vector<int>& roadmap_of) {
    std::set<int> cells(shared.begin(), shared.end());
    for (int c : shared)
        for (int e : lat.cell_edges[static_cast<std::size_t>(c)]) {
            const int nb = lat.neighbor_across(c, e);
            if (nb >= 0) cells.insert(nb);
        }
    std::set<int> nodes;
    for (int c : cells)
        for (int v : lat.cells[static_cast<std::size_t>(c)]) {
            const int id = roadmap_of[static_cast<std::size_t>(v)];
            if (id >= 0) nodes.insert(id);
        }
    (void)rm;
    return {nodes.begin(), nodes.end()};
}

// Closest (by C-space distance) candidate pair on different local sides
// whose roadmap detour is more than twice as long as the direct route.
// Sets `blocked` when some such pair has no continuous path at all.
std::optional<BridgeChoice> find_violation(const Roadmap& rm, const PathFinder& finder,
                                           const std::vector<int>& cand, bool& blocked) {
    std::map<int, int> local;
    for (std::size_t i = 0; i < cand.size(); ++i) local[cand[i]] = static_cast<int>(i);
    UnionFind uf(cand.size());
    for (const RoadmapEdge& e : rm.edges) {
        auto a = local.find(e.a), b = local.find(e.b);
        if (a != local.end() && b != local.end()) uf.unite(a->second, b->second);
    }
    for (const BridgeGroup& g : rm.groups) {
        auto a = local.find(g.nodes.front()), b = local.find(g.nodes.back());
        if (a != local.end() && b != local.end()) uf.unite(a->second, b->second);
    }

    struct Pair {
        double euclid;
        double road;
        int p, q;
    };
    std::vector<Pair> pairs;
    for (std::size_t i = 0; i < cand.size(); ++i) {
        const auto dist = rm.distances_from(cand[i]);
        for (std::size_t j = i + 1; j < cand.size(); ++j) {
            if (uf.find(static_cast<int>(i)) == uf.find(static_cast<int>(j))) continue;
            const double e = distance(rm.nodes[static_cast<std::size_t>(cand[i])], rm.nodes[static_cast<std::size_t>(cand[j])]);
            const double road = dist[static_cast<std::size_t>(cand[j])];
            if (road <= 2.0 * e + 2.0 * rm.side) continue;
            pairs.push_back({e, road, cand[i], cand[j]});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        return std::tie(a.euclid, a.p, a.q) < std::tie(b.euclid, b.p, b.q);
    });

    std::optional<BridgeChoice> best;
    for (const Pair& pr : pairs) {
        if (best && pr.euclid >= best->path.length) break;
        auto path = finder.try_shortest_path(rm.nodes[static_cast<std::size_t>(pr.p)], rm.nodes[static_cast<std::size_t>(pr.q)]);
        if (!path) {
            blocked = true;
            continue;
        }
        if (pr.road <= 2.0 * path->length + 2.0 * rm.side) continue;
        if (!best || path->length < best->path.length) best = BridgeChoice{pr.p, pr.q, std::move(*path)};
    }
    return best;
}

int node_region(const Roadmap& rm, const CSpace& cs, int v) { return cs.region_of(rm.nodes[static_cast<std::size_t>(v)]); }

}  // namespace

Roadmap restore_connectivity(const Roadmap& rm, const Lattice& lat, const CSpace& cs, const PathFinder& finder,
                             RestoreReport* report_out) {
    RestoreReport report;
    Roadmap out = rm;
    if (out.nodes.empty()) {
        if (report_out) *report_out = report;
        return out;
    }
    std::vector<int> roadmap_of(lat.nodes.size(), -1);
    for (std::size_t v = 0; v < out.nodes.size(); ++v)
        if (out.lattice_node[v] >= 0) roadmap_of[static_cast<std::size_t>(out.lattice_node[v])] = static_cast<int>(v);

    const std::vector<Obstacle> obstacles = collect_obstacles(lat, cs);
    const int count = static_cast<int>(obstacles.size());

    for (int a = 0; a < count; ++a) {
        for (int b = a + 1; b < count; ++b) {
            const Obstacle& oa = obstacles[static_cast<std::size_t>(a)];
            const Obstacle& ob = obstacles[static_cast<std::size_t>(b)];
            std::vector<int> shared;
            if (oa.region == ob.region) {
                for (std::size_t c = 0; c < lat.cells.size(); ++c)
                    if (oa.member[c] && ob.member[c]) shared.push_back(static_cast<int>(c));
            } else {
                // Different components: report rings that come within one cell.
                bool touching = false;
                for (std::size_t c = 0; c < lat.cells.size() && !touching; ++c) {
                    if (!oa.crossed[c]) continue;
                    touching = ob.crossed[c];
                    for (int e : lat.cell_edges[c]) {
                        const int nb = lat.neighbor_across(static_cast<int>(c), e);
                        if (nb >= 0 && ob.crossed[static_cast<std::size_t>(nb)]) touching = true;
                    }
                }
                if (touching) report.impassable.push_back({a, b});
                continue;
            }
            if (shared.empty()) continue;

            const std::vector<int> cand = candidate_nodes(out, lat, shared, roadmap_of);
            int existing = 0;
            for (const BridgeGroup& g : out.groups) existing += g.obstacles == std::array<int, 2>{a, b};
            for (int round = existing; round < kMaxBridgesPerPair; ++round) {
                bool blocked = false;
                auto choice = find_violation(out, finder, cand, blocked);
                if (!choice) {
                    if (blocked) report.impassable.push_back({a, b});
                    break;
                }
                add_bridge(out, choice->p, choice->q, choice->path.polyline, {a, b}, report);
            }
        }
    }

    // Pinches of a region's outer ring against itself leave split components
    // inside one region; join them through their closest node pairs.
    std::vector<int> first_obstacle(cs.regions().size(), 0);
    for (int i = count - 1; i >= 0; --i)
        if (obstacles[static_cast<std::size_t>(i)].hole < 0)
            first_obstacle[static_cast<std::size_t>(obstacles[static_cast<std::size_t>(i)].region)] = i;
    std::set<int> gave_up;
    while (true) {
        const std::vector<int> label = out.components();
        std::map<int, int> comp_region;
        for (std::size_t v = 0; v < out.nodes.size(); ++v)
            if (!comp_region.count(label[v]) && out.is_lattice_node(static_cast<int>(v)))
                comp_region[label[v]] = node_region(out, cs, static_cast<int>(v));
        // First region (by index) holding more than one component.
        std::map<int, std::vector<int>> per_region;
        for (const auto& [comp, region] : comp_region)
            if (region >= 0 && !gave_up.count(region)) per_region[region].push_back(comp);
        auto split = std::find_if(per_region.begin(), per_region.end(), [](const auto& kv) { return kv.second.size() > 1; });
        if (split == per_region.end()) break;
        const int region = split->first;
        const int main = split->second[0];

        struct Pair {
            double euclid;
            int p, q;
        };
        std::vector<Pair> pairs;
        for (std::size_t u = 0; u < out.nodes.size(); ++u) {
            if (label[u] != main) continue;
            for (std::size_t v = 0; v < out.nodes.size(); ++v) {
                if (label[v] == main || std::find(split->second.begin(), split->second.end(), label[v]) == split->second.end())
                    continue;
                if (!out.is_lattice_node(static_cast<int>(v))) continue;
                pairs.push_back({distance(out.nodes[u], out.nodes[v]), static_cast<int>(u), static_cast<int>(v)});
            }
        }
        const std::size_t keep = std::min<std::size_t>(pairs.size(), kJoinCandidates);
        std::partial_sort(pairs.begin(), pairs.begin() + static_cast<long>(keep), pairs.end(), [](const Pair& a, const Pair& b) {
            return std::tie(a.euclid, a.p, a.q) < std::tie(b.euclid, b.p, b.q);
        });
        std::optional<BridgeChoice> best;
        for (std::size_t i = 0; i < keep; ++i) {
            auto path = finder.try_shortest_path(out.nodes[static_cast<std::size_t>(pairs[i].p)],
                                                 out.nodes[static_cast<std::size_t>(pairs[i].q)]);
            if (path && (!best || path->length < best->path.length))
                best = BridgeChoice{pairs[i].p, pairs[i].q, std::move(*path)};
        }
        if (!best) {
            gave_up.insert(region);
            const int ob = first_obstacle[static_cast<std::size_t>(region)];
            report.impassable.push_back({ob, ob});
            continue;
        }
        const int ob = first_obstacle[static_cast<std::size_t>(region)];
        add_bridge(out, best->p, best->q, best->path.polyline, {ob, ob}, report);
    }

    if (report_out) *report_out = report;
    return out;
}

}  // namespace hexaplan
