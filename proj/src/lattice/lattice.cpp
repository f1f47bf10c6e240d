#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <set>

#include "hexaplan/error.hpp"
#include "hexaplan/lattice.hpp"

namespace hexaplan {

namespace {

class PatchBuilder {
public:
    PatchBuilder(Lattice& lat, Point anchor)
        : lat_(lat), anchor_(anchor), quantum_(lat.spec.side * 1e-6) {}

    void add_cell(const std::vector<Point>& ring) {
        const int cell = static_cast<int>(lat_.cells.size());
        std::vector<int> ids;
        ids.reserve(ring.size());
        for (const Point& p : ring) ids.push_back(node_id(p));
        std::vector<int> sides;
        sides.reserve(ids.size());
        for (std::size_t i = 0; i < ids.size(); ++i)
            sides.push_back(edge_id(ids[i], ids[(i + 1) % ids.size()], cell));
        lat_.cells.push_back(std::move(ids));
        lat_.cell_edges.push_back(std::move(sides));
    }

private:
    int node_id(Point p) {
        const std::pair<long long, long long> key{std::llround((p.x - anchor_.x) / quantum_),
                                                  std::llround((p.y - anchor_.y) / quantum_)};
        const auto [it, inserted] = nodes_.try_emplace(key, static_cast<int>(lat_.nodes.size()));
        if (inserted) {
            lat_.nodes.push_back(p);
            lat_.node_edges.emplace_back();
        }
        return it->second;
    }

    int edge_id(int a, int b, int cell) {
        const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
        const auto [it, inserted] = edges_.try_emplace(key, static_cast<int>(lat_.edges.size()));
        if (inserted) {
            lat_.edges.push_back({key.first, key.second});
            lat_.edge_cells.push_back({cell, -1});
            lat_.node_edges[static_cast<std::size_t>(a)].push_back(it->second);
            lat_.node_edges[static_cast<std::size_t>(b)].push_back(it->second);
        } else {
            lat_.edge_cells[static_cast<std::size_t>(it->second)][1] = cell;
        }
        return it->second;
    }

    Lattice& lat_;
    Point anchor_;
    double quantum_;
    std::map<std::pair<long long, long long>, int> nodes_;
    std::map<std::pair<int, int>, int> edges_;
};

void build_hexagonal(PatchBuilder& builder, double s, Point center0, Bbox box) {
    const double sq3 = std::sqrt(3.0);
    const int r_lo = static_cast<int>(std::floor((box.lo.y - center0.y) / (1.5 * s)));
    const int r_hi = static_cast<int>(std::ceil((box.hi.y - center0.y) / (1.5 * s)));
    for (int r = r_lo; r <= r_hi; ++r) {
        const int q_lo = static_cast<int>(std::floor((box.lo.x - center0.x) / (sq3 * s) - 0.5 * r));
        const int q_hi = static_cast<int>(std::ceil((box.hi.x - center0.x) / (sq3 * s) - 0.5 * r));
        for (int q = q_lo; q <= q_hi; ++q) {
            const Point c = center0 + s * Point{sq3 * q + 0.5 * sq3 * r, 1.5 * r};
            std::vector<Point> ring;
            for (int k = 0; k < 6; ++k) {
                const double a = std::numbers::pi / 6.0 + k * std::numbers::pi / 3.0;
                ring.push_back(c + s * Point{std::cos(a), std::sin(a)});
            }
            builder.add_cell(ring);
        }
    }
}

void build_square(PatchBuilder& builder, double s, Point center0, Bbox box) {
    const int i_lo = static_cast<int>(std::floor((box.lo.x - center0.x) / s));
    const int i_hi = static_cast<int>(std::ceil((box.hi.x - center0.x) / s));
    const int j_lo = static_cast<int>(std::floor((box.lo.y - center0.y) / s));
    const int j_hi = static_cast<int>(std::ceil((box.hi.y - center0.y) / s));
    const double h = 0.5 * s;
    for (int j = j_lo; j <= j_hi; ++j) {
        for (int i = i_lo; i <= i_hi; ++i) {
            const Point c = center0 + s * Point{double(i), double(j)};
            builder.add_cell({c + Point{-h, -h}, c + Point{h, -h}, c + Point{h, h}, c + Point{-h, h}});
        }
    }
}

void build_triangular(PatchBuilder& builder, double s, Point center0, Bbox box) {
    const double h = 0.5 * std::sqrt(3.0) * s;
    // Lattice point P(a, b) = base + a (s, 0) + b (s/2, h); centroid of the
    // up-triangle at (0, 0) is center0.
    const Point base = center0 - Point{0.5 * s, h / 3.0};
    auto node = [&](int a, int b) { return base + Point{a * s + 0.5 * b * s, b * h}; };
    const int b_lo = static_cast<int>(std::floor((box.lo.y - base.y) / h));
    const int b_hi = static_cast<int>(std::ceil((box.hi.y - base.y) / h));
    for (int b = b_lo; b <= b_hi; ++b) {
        const int a_lo = static_cast<int>(std::floor((box.lo.x - base.x) / s - 0.5 * b)) - 1;
        const int a_hi = static_cast<int>(std::ceil((box.hi.x - base.x) / s - 0.5 * b));
        for (int a = a_lo; a <= a_hi; ++a) {
            builder.add_cell({node(a, b), node(a + 1, b), node(a, b + 1)});
            builder.add_cell({node(a + 1, b), node(a + 1, b + 1), node(a, b + 1)});
        }
    }
}

}  // namespace

std::vector<bool> Lattice::free_mask() const {
    std::vector<bool> mask(edges.size());
    for (std::size_t e = 0; e < edges.size(); ++e) mask[e] = state[e] == EdgeState::free;
    return mask;
}

std::size_t Lattice::free_edge_count() const {
    return static_cast<std::size_t>(std::count(state.begin(), state.end(), EdgeState::free));
}

bool Lattice::cell_contains(int cell, Point p, double tol) const {
    const auto& ring = cells[static_cast<std::size_t>(cell)];
    for (std::size_t i = 0; i < ring.size(); ++i) {
        const Point a = nodes[static_cast<std::size_t>(ring[i])];
        const Point b = nodes[static_cast<std::size_t>(ring[(i + 1) % ring.size()])];
        if (cross(b - a, p - a) < -tol * distance(a, b)) return false;
    }
    return true;
}

Point Lattice::cell_center(int cell) const {
    Point c{};
    const auto& ring = cells[static_cast<std::size_t>(cell)];
    for (int v : ring) c = c + nodes[static_cast<std::size_t>(v)];
    return (1.0 / static_cast<double>(ring.size())) * c;
}

int Lattice::neighbor_across(int cell, int edge) const {
    const auto& pair = edge_cells[static_cast<std::size_t>(edge)];
    return pair[0] == cell ? pair[1] : pair[0];
}

bool Lattice::is_border_cell(int cell) const {
    for (int e : cell_edges[static_cast<std::size_t>(cell)])
        if (edge_cells[static_cast<std::size_t>(e)][1] < 0) return true;
    return false;
}

int Lattice::locate_cell(Point p) const {
    const int col = static_cast<int>(std::floor((p.x - bucket_origin.x) / bucket_size));
    const int row = static_cast<int>(std::floor((p.y - bucket_origin.y) / bucket_size));
    if (col < 0 || row < 0 || col >= bucket_cols || row >= bucket_rows) return -1;
    for (int c : buckets[static_cast<std::size_t>(row * bucket_cols + col)])
        if (cell_contains(c, p)) return c;
    return -1;
}

Lattice overlay_lattice(const TilingSpec& spec, Bbox region, Point origin) {
    if (!(spec.side > 0.0)) throw Error(ErrorKind::input, "lattice side must be positive");
    Lattice lat;
    lat.spec = spec;
    lat.origin = origin;
    const double s = spec.side;
    const double margin = 2.0 * 2.0 * s;
    const Bbox box{region.lo - Point{margin, margin}, region.hi + Point{margin, margin}};
    const Point center0 = origin - Point{0.25 * s, 0.25 * s};

    PatchBuilder builder(lat, center0);
    switch (spec.kind) {
        case TilingKind::hexagonal: build_hexagonal(builder, s, center0, box); break;
        case TilingKind::square: build_square(builder, s, center0, box); break;
        case TilingKind::triangular: build_triangular(builder, s, center0, box); break;
    }
    lat.state.assign(lat.edges.size(), EdgeState::outside);

    const Bbox extent = bbox_of(lat.nodes);
    lat.bucket_size = s;
    lat.bucket_origin = extent.lo;
    lat.bucket_cols = static_cast<int>(std::ceil(extent.width() / s)) + 1;
    lat.bucket_rows = static_cast<int>(std::ceil(extent.height() / s)) + 1;
    lat.buckets.assign(static_cast<std::size_t>(lat.bucket_cols * lat.bucket_rows), {});
    for (std::size_t c = 0; c < lat.cells.size(); ++c) {
        Ring ring;
        for (int v : lat.cells[c]) ring.push_back(lat.nodes[static_cast<std::size_t>(v)]);
        const Bbox b = bbox_of(ring);
        const int c0 = static_cast<int>(std::floor((b.lo.x - extent.lo.x) / s - 1e-9));
        const int c1 = static_cast<int>(std::floor((b.hi.x - extent.lo.x) / s + 1e-9));
        const int r0 = static_cast<int>(std::floor((b.lo.y - extent.lo.y) / s - 1e-9));
        const int r1 = static_cast<int>(std::floor((b.hi.y - extent.lo.y) / s + 1e-9));
        for (int r = std::max(r0, 0); r <= std::min(r1, lat.bucket_rows - 1); ++r)
            for (int col = std::max(c0, 0); col <= std::min(c1, lat.bucket_cols - 1); ++col)
                lat.buckets[static_cast<std::size_t>(r * lat.bucket_cols + col)].push_back(
                    static_cast<int>(c));
    }
    return lat;
}

RingTrace trace_ring(const Lattice& lat, const Ring& ring) {
    std::set<int> cells;
    std::set<int> edges;
    int current = lat.locate_cell(ring.front());
    if (current < 0) throw Error(ErrorKind::internal, "boundary vertex outside the lattice patch");

    for (std::size_t i = 0; i < ring.size(); ++i) {
        const Point a = ring[i];
        const Point b = ring[(i + 1) % ring.size()];
        // Flood across the cell edges this boundary segment meets.
        std::vector<int> visited{current};
        std::deque<int> open{current};
        while (!open.empty()) {
            const int c = open.front();
            open.pop_front();
            cells.insert(c);
            for (int e : lat.cell_edges[static_cast<std::size_t>(c)]) {
                const auto& ends = lat.edges[static_cast<std::size_t>(e)];
                if (!segments_intersect(a, b, lat.nodes[static_cast<std::size_t>(ends[0])],
                                        lat.nodes[static_cast<std::size_t>(ends[1])]))
                    continue;
                edges.insert(e);
                const int next = lat.neighbor_across(c, e);
                if (next >= 0 && std::find(visited.begin(), visited.end(), next) == visited.end()) {
                    visited.push_back(next);
                    open.push_back(next);
                }
            }
        }
        std::sort(visited.begin(), visited.end());
        int next = -1;
        for (int c : visited)
            if (lat.cell_contains(c, b)) {
                next = c;
                break;
            }
        if (next < 0) next = lat.locate_cell(b);
        if (next < 0) throw Error(ErrorKind::internal, "boundary vertex outside the lattice patch");
        current = next;
    }
    return {std::vector<int>(cells.begin(), cells.end()), std::vector<int>(edges.begin(), edges.end())};
}

std::vector<int> boundary_walk(const CSpace& cs, const Lattice& lat) {
    std::set<int> crossing;
    auto walk = [&](const Ring& ring) {
        const RingTrace trace = trace_ring(lat, ring);
        crossing.insert(trace.edges.begin(), trace.edges.end());
    };
    for (const PolygonWithHoles& region : cs.regions()) {
        walk(region.outer);
        for (const Ring& h : region.holes) walk(h);
    }
    return {crossing.begin(), crossing.end()};
}

std::vector<int> interior_seeds(const CSpace& cs, const Lattice& lat, std::span<const int> crossing) {
    std::set<int> seeds;
    for (int e : crossing)
        for (int v : lat.edges[static_cast<std::size_t>(e)])
            if (contains_point(cs, lat.nodes[static_cast<std::size_t>(v)])) seeds.insert(v);
    return {seeds.begin(), seeds.end()};
}

std::vector<bool> classify_by_bfs(const Lattice& lat, std::span<const int> crossing,
                                  std::span<const int> seeds) {
    if (seeds.empty()) throw Error(ErrorKind::empty_lattice, "no lattice node lies inside the C-space");
    std::vector<bool> blocked(lat.edges.size(), false);
    for (int e : crossing) blocked[static_cast<std::size_t>(e)] = true;

    std::vector<bool> free(lat.edges.size(), false);
    std::vector<bool> seen(lat.nodes.size(), false);
    std::deque<int> open;
    for (int s : seeds) {
        if (seen[static_cast<std::size_t>(s)]) continue;
        seen[static_cast<std::size_t>(s)] = true;
        open.push_back(s);
        while (!open.empty()) {
            const int u = open.front();
            open.pop_front();
            for (int e : lat.node_edges[static_cast<std::size_t>(u)]) {
                if (blocked[static_cast<std::size_t>(e)]) continue;
                free[static_cast<std::size_t>(e)] = true;
                const auto& ends = lat.edges[static_cast<std::size_t>(e)];
                const int v = ends[0] == u ? ends[1] : ends[0];
                if (!seen[static_cast<std::size_t>(v)]) {
                    seen[static_cast<std::size_t>(v)] = true;
                    open.push_back(v);
                }
            }
        }
    }
    return free;
}

Lattice impose_lattice(const CSpace& cs, const TilingSpec& spec, Point offset) {
    spec.validate(cs.robot_radius());
    if (cs.empty()) throw Error(ErrorKind::empty_lattice, "C-space is empty");
    const Bbox box = cs.bbox();
    Lattice lat = overlay_lattice(spec, box, box.lo + offset);
    const std::vector<int> crossing = boundary_walk(cs, lat);
    const std::vector<int> seeds = interior_seeds(cs, lat, crossing);
    const std::vector<bool> free = classify_by_bfs(lat, crossing, seeds);
    for (int e : crossing) lat.state[static_cast<std::size_t>(e)] = EdgeState::crossing;
    for (std::size_t e = 0; e < free.size(); ++e)
        if (free[e]) lat.state[e] = EdgeState::free;
    if (lat.free_edge_count() == 0)
        throw Error(ErrorKind::empty_lattice, "C-space is too small to hold a lattice edge");
    return lat;
}

nlohmann::json lattice_to_json(const Lattice& lat) {
    nlohmann::json doc;
    doc["kind"] = to_string(lat.spec.kind);
    doc["side"] = lat.spec.side;
    doc["nodes"] = nlohmann::json::array();
    for (std::size_t v = 0; v < lat.nodes.size(); ++v)
        doc["nodes"].push_back({v, lat.nodes[v].x, lat.nodes[v].y});
    doc["edges"] = nlohmann::json::array();
    for (std::size_t e = 0; e < lat.edges.size(); ++e)
        doc["edges"].push_back({lat.edges[e][0], lat.edges[e][1], lat.is_free(static_cast<int>(e))});
    return doc;
}

}  // namespace hexaplan
