#include <limits>
#include <queue>

#include "hexaplan/error.hpp"
#include "hexaplan/geometry.hpp"

namespace hexaplan {

VisGraph build_visibility_graph(const CSpace& cs) {
    VisGraph g;
    for (const PolygonWithHoles& region : cs.regions()) {
        g.vertices.insert(g.vertices.end(), region.outer.begin(), region.outer.end());
        for (const Ring& h : region.holes) g.vertices.insert(g.vertices.end(), h.begin(), h.end());
    }
    const int n = static_cast<int>(g.vertices.size());
    g.adjacency.assign(n, {});
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (!segment_free(cs, g.vertices[i], g.vertices[j])) continue;
            const double len = distance(g.vertices[i], g.vertices[j]);
            g.edges.push_back({i, j, len});
            g.adjacency[i].emplace_back(j, len);
            g.adjacency[j].emplace_back(i, len);
        }
    }
    return g;
}

PathFinder::PathFinder(const CSpace& cs) : PathFinder(cs, build_visibility_graph(cs)) {}

PathFinder::PathFinder(const CSpace& cs, VisGraph graph) : cs_(&cs), graph_(std::move(graph)) {}

std::optional<ContinuousPath> PathFinder::try_shortest_path(Point a, Point b) const {
    if (!contains_point(*cs_, a) || !contains_point(*cs_, b))
        throw Error(ErrorKind::input, "shortest path endpoint outside the C-space");
    if (distance(a, b) <= kGeomTol) return ContinuousPath{0.0, {a}};
    if (segment_free(*cs_, a, b)) return ContinuousPath{distance(a, b), {a, b}};

    // Dijkstra over the visibility graph plus the two query points.
    const int n = static_cast<int>(graph_.vertices.size());
    const int src = n;
    const int dst = n + 1;
    std::vector<std::vector<std::pair<int, double>>> extra(n + 2);
    for (int v = 0; v < n; ++v) {
        const Point p = graph_.vertices[v];
        if (segment_free(*cs_, a, p)) extra[src].emplace_back(v, distance(a, p));
        if (segment_free(*cs_, p, b)) extra[v].emplace_back(dst, distance(p, b));
    }

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n + 2, inf);
    std::vector<int> parent(n + 2, -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    dist[src] = 0.0;
    open.emplace(0.0, src);
    while (!open.empty()) {
        const auto [d, u] = open.top();
        open.pop();
        if (d > dist[u]) continue;
        if (u == dst) break;
        auto relax = [&](int v, double w) {
            if (d + w < dist[v]) {
                dist[v] = d + w;
                parent[v] = u;
                open.emplace(dist[v], v);
            }
        };
        if (u < n)
            for (const auto& [v, w] : graph_.adjacency[u]) relax(v, w);
        for (const auto& [v, w] : extra[u]) relax(v, w);
    }
    if (dist[dst] == inf) return std::nullopt;

    ContinuousPath path;
    path.length = dist[dst];
    std::vector<Point> reversed;
    for (int v = dst; v != -1; v = parent[v])
        reversed.push_back(v == src ? a : v == dst ? b : graph_.vertices[v]);
    path.polyline.assign(reversed.rbegin(), reversed.rend());
    return path;
}

ContinuousPath PathFinder::shortest_path(Point a, Point b) const {
    auto path = try_shortest_path(a, b);
    if (!path) throw Error(ErrorKind::unreachable, "points lie in different C-space components");
    return *path;
}

ContinuousPath shortest_path_continuous(const CSpace& cs, Point a, Point b) {
    return PathFinder(cs).shortest_path(a, b);
}

}  // namespace hexaplan
