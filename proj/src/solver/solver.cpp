#include <algorithm>
#include <chrono>
#include <map>
#include <unordered_map>

#include "hexaplan/error.hpp"
#include "hexaplan/solver.hpp"

namespace hexaplan {

namespace {

const Roadmap& roadmap_of(const DiscreteInstance& di) {
    if (!di.roadmap) throw Error(ErrorKind::internal, "discrete instance without a roadmap");
    return *di.roadmap;
}

std::size_t idx(int v) { return static_cast<std::size_t>(v); }

// Motion primitive ids: waits are node ids, moves are node_count + edge id.
struct Primitives {
    int nodes = 0;
    int wait(int v) const { return v; }
    int move(int e) const { return nodes + e; }
    int of(const Arc& a) const { return a.edge < 0 ? wait(a.u) : move(a.edge); }
};

struct ZoneSets {
    std::vector<int> core;  // bridge edges and interior waits
    std::vector<int> near;
};

std::vector<ZoneSets> zone_sets(const Roadmap& rm, double radius, const Primitives& prim) {
    std::vector<ZoneSets> out;
    for (const ExclusionZone& z : exclusion_zones(rm, radius)) {
        ZoneSets s;
        for (int e : z.bridge_edges) s.core.push_back(prim.move(e));
        for (int v : z.interior_nodes) s.core.push_back(prim.wait(v));
        for (int v : z.near_nodes) s.near.push_back(prim.wait(v));
        for (int e : z.near_edges) s.near.push_back(prim.move(e));
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

int underestimate_T(const DiscreteInstance& di) {
    const Roadmap& rm = roadmap_of(di);
    int best = 0;
    for (std::size_t i = 0; i < di.size(); ++i) {
        if (di.start_node[i] == di.goal_node[i]) continue;
        const int h = rm.hops_from(di.start_node[i])[idx(di.goal_node[i])];
        if (h < 0)
            throw Error(ErrorKind::infeasible, "robot " + std::to_string(i) + ": goal unreachable on the roadmap",
                        static_cast<int>(i));
        best = std::max(best, h);
    }
    return best;
}

ReachSets reachable_sets(const DiscreteInstance& di, int T) {
    const Roadmap& rm = roadmap_of(di);
    ReachSets reach(di.size(), std::vector<std::vector<int>>(idx(T + 1)));
    for (std::size_t i = 0; i < di.size(); ++i) {
        const auto from_start = rm.hops_from(di.start_node[i]);
        const auto to_goal = rm.hops_from(di.goal_node[i]);
        for (int v = 0; v < static_cast<int>(rm.node_count()); ++v) {
            const int a = from_start[idx(v)], b = to_goal[idx(v)];
            if (a < 0 || b < 0) continue;
            for (int t = a; t <= T - b; ++t) reach[i][idx(t)].push_back(v);
        }
    }
    return reach;
}

ReachSets full_sets(const DiscreteInstance& di, int T) {
    const Roadmap& rm = roadmap_of(di);
    ReachSets reach(di.size(), std::vector<std::vector<int>>(idx(T + 1)));
    const auto comp = rm.components();
    for (std::size_t i = 0; i < di.size(); ++i) {
        std::vector<int> all;
        for (int v = 0; v < static_cast<int>(rm.node_count()); ++v)
            if (comp[idx(v)] == comp[idx(di.start_node[i])]) all.push_back(v);
        for (int t = 0; t <= T; ++t) reach[i][idx(t)] = all;
        reach[i][0] = {di.start_node[i]};
        if (std::binary_search(all.begin(), all.end(), di.goal_node[i]))
            reach[i][idx(T)] = {di.goal_node[i]};
        else
            reach[i][idx(T)].clear();
        if (T == 0 && di.start_node[i] != di.goal_node[i]) reach[i][0].clear();
    }
    return reach;
}

std::optional<TimeExpansion> time_expand(const DiscreteInstance& di, int T, const ReachSets& reach) {
    const Roadmap& rm = roadmap_of(di);
    if (reach.size() != di.size()) throw Error(ErrorKind::internal, "reach sets do not match the robot count");
    TimeExpansion tx;
    tx.T = T;
    tx.reach = reach;
    std::vector<char> next(rm.node_count(), 0);
    for (std::size_t i = 0; i < di.size(); ++i) {
        if (reach[i].size() != idx(T + 1)) throw Error(ErrorKind::internal, "reach sets do not match T");
        for (const auto& layer : reach[i])
            if (layer.empty()) return std::nullopt;
        for (int t = 0; t < T; ++t) {
            for (int v : reach[i][idx(t + 1)]) next[idx(v)] = 1;
            for (int u : reach[i][idx(t)]) {
                // Wait first, then neighbours in id order.
                if (next[idx(u)]) tx.arcs.push_back({static_cast<int>(i), u, u, t, -1});
                for (const auto& [w, e] : rm.adjacency[idx(u)])
                    if (next[idx(w)]) tx.arcs.push_back({static_cast<int>(i), u, w, t, e});
            }
            for (int v : reach[i][idx(t + 1)]) next[idx(v)] = 0;
        }
    }
    return tx;
}

IlpModel build_ilp(const TimeExpansion& tx, const DiscreteInstance& di) {
    const Roadmap& rm = roadmap_of(di);
    const int N = static_cast<int>(rm.node_count());
    const int T = tx.T;
    const Primitives prim{N};
    IlpModel m;
    for (const Arc& a : tx.arcs) m.add_var({a.robot, a.u, a.v, a.t});

    auto key = [&](long long robot, long long t, long long v) { return (robot * (T + 2) + t) * N + v; };
    std::unordered_map<long long, std::vector<int>> out_arcs, in_arcs;
    std::vector<std::vector<int>> layer(di.size() * idx(T > 0 ? T : 1));
    for (int k = 0; k < static_cast<int>(tx.arcs.size()); ++k) {
        const Arc& a = tx.arcs[idx(k)];
        out_arcs[key(a.robot, a.t, a.u)].push_back(k);
        in_arcs[key(a.robot, a.t + 1, a.v)].push_back(k);
        layer[idx(a.robot) * idx(T) + idx(a.t)].push_back(k);
    }
    auto terms_of = [](const std::vector<int>& vars, long long coef) {
        std::vector<Term> t;
        for (int v : vars) t.push_back({v, coef});
        return t;
    };

    for (std::size_t i = 0; i < di.size(); ++i) {
        const int r = static_cast<int>(i);
        if (T == 0) continue;
        m.add_constraint(terms_of(out_arcs[key(r, 0, di.start_node[i])], 1), Relation::eq, 1);
        m.add_constraint(terms_of(in_arcs[key(r, T, di.goal_node[i])], 1), Relation::eq, 1);
        for (int t = 1; t < T; ++t) {
            for (int v : tx.reach[i][idx(t)]) {
                auto terms = terms_of(in_arcs[key(r, t, v)], 1);
                for (int k : out_arcs[key(r, t, v)]) terms.push_back({k, -1});
                if (terms.empty()) continue;
                m.add_constraint(std::move(terms), Relation::eq, 0);
            }
        }
        // Implied by the flow constraints, but lets the solver propagate.
        for (int t = 0; t < T; ++t) m.add_constraint(terms_of(layer[i * idx(T) + idx(t)], 1), Relation::eq, 1);
    }

    // Per step: arcs grouped by arrival node and by primitive.
    std::vector<std::map<int, std::vector<int>>> arrive(idx(T)), by_prim(idx(T));
    for (int k = 0; k < static_cast<int>(tx.arcs.size()); ++k) {
        const Arc& a = tx.arcs[idx(k)];
        arrive[idx(a.t)][a.v].push_back(k);
        by_prim[idx(a.t)][prim.of(a)].push_back(k);
    }
    for (int t = 0; t < T; ++t) {
        for (const auto& [v, ks] : arrive[idx(t)]) {
            std::map<int, int> robots;
            for (int k : ks) robots[tx.arcs[idx(k)].robot] = 1;
            if (robots.size() > 1) m.add_constraint(terms_of(ks, 1), Relation::le, 1);
        }
        // Edge moves in both directions by different robots (swaps).
        for (const auto& [p, ks] : by_prim[idx(t)]) {
            if (p < N || ks.size() < 2) continue;
            std::map<int, int> robots;
            for (int k : ks) robots[tx.arcs[idx(k)].robot] = 1;
            if (robots.size() > 1) m.add_constraint(terms_of(ks, 1), Relation::le, 1);
        }
    }

    const auto zones = zone_sets(rm, di.robot_radius, prim);
    for (int t = 0; t < T; ++t) {
        const auto& here = by_prim[idx(t)];
        for (const ZoneSets& z : zones) {
            std::vector<int> core;
            for (int p : z.core)
                if (auto it = here.find(p); it != here.end()) core.insert(core.end(), it->second.begin(), it->second.end());
            if (core.empty()) continue;
            if (core.size() > 1) m.add_constraint(terms_of(core, 1), Relation::le, 1);
            for (int p : z.near) {
                auto it = here.find(p);
                if (it == here.end()) continue;
                auto terms = terms_of(core, 1);
                for (int k : it->second) terms.push_back({k, 1});
                m.add_constraint(std::move(terms), Relation::le, 1);
            }
        }
    }
    return m;
}

std::optional<std::string> check_discrete_plan(const DiscretePlan& plan, const DiscreteInstance& di) {
    const Roadmap& rm = roadmap_of(di);
    const int T = plan.makespan_steps;
    if (plan.paths.size() != di.size()) return "plan has " + std::to_string(plan.paths.size()) + " paths";
    for (std::size_t i = 0; i < di.size(); ++i) {
        const auto& p = plan.paths[i];
        const std::string who = "robot " + std::to_string(i);
        if (p.size() != idx(T + 1)) return who + ": path length " + std::to_string(p.size());
        if (p.front() != di.start_node[i]) return who + ": does not start at its start node";
        if (p.back() != di.goal_node[i]) return who + ": does not end at its goal node";
        for (int t = 0; t < T; ++t)
            if (p[idx(t)] != p[idx(t + 1)] && rm.find_edge(p[idx(t)], p[idx(t + 1)]) < 0)
                return who + ": jumps between non-adjacent nodes at step " + std::to_string(t);
    }
    for (int t = 0; t <= T; ++t) {
        std::map<int, std::size_t> at;
        for (std::size_t i = 0; i < di.size(); ++i) {
            auto [it, fresh] = at.emplace(plan.paths[i][idx(t)], i);
            if (!fresh)
                return "robots " + std::to_string(it->second) + " and " + std::to_string(i) + " share node " +
                       std::to_string(it->first) + " at step " + std::to_string(t);
        }
    }
    const Primitives prim{static_cast<int>(rm.node_count())};
    const auto zones = zone_sets(rm, di.robot_radius, prim);
    for (int t = 0; t < T; ++t) {
        std::vector<int> used;
        for (std::size_t i = 0; i < di.size(); ++i) {
            const int u = plan.paths[i][idx(t)], v = plan.paths[i][idx(t + 1)];
            used.push_back(u == v ? prim.wait(u) : prim.move(rm.find_edge(u, v)));
        }
        for (std::size_t i = 0; i < used.size(); ++i)
            for (std::size_t j = i + 1; j < used.size(); ++j)
                if (used[i] == used[j] && used[i] >= prim.nodes)
                    return "robots " + std::to_string(i) + " and " + std::to_string(j) + " swap at step " +
                           std::to_string(t);
        for (std::size_t g = 0; g < zones.size(); ++g) {
            const auto& z = zones[g];
            int core = 0, near = 0;
            for (int p : used) {
                core += std::count(z.core.begin(), z.core.end(), p) > 0;
                near += std::count(z.near.begin(), z.near.end(), p) > 0;
            }
            if (core > 1 || (core == 1 && near > 0))
                return "bridge group " + std::to_string(g) + " shared at step " + std::to_string(t);
        }
    }
    return std::nullopt;
}

DiscretePlan solve_discrete(const DiscreteInstance& di, const DiscreteOptions& opts, DiscreteStats* stats) {
    const auto start = std::chrono::steady_clock::now();
    DiscreteStats local;
    DiscreteStats& st = stats ? *stats : local;
    st = {};
    const int lower = underestimate_T(di);
    st.lower_T = lower;
    const int max_T = opts.max_T >= 0 ? opts.max_T : 4 * lower + 3 * static_cast<int>(di.size());

    for (int T = lower; T <= max_T; ++T) {
        ++st.attempts;
        const ReachSets reach = opts.prune ? reachable_sets(di, T) : full_sets(di, T);
        const auto tx = time_expand(di, T, reach);
        if (!tx) continue;
        const IlpModel model = build_ilp(*tx, di);
        st.variables = model.num_vars;
        st.constraints = static_cast<int>(model.constraints.size());
        SolveBudget budget = opts.budget;
        budget.max_seconds -= std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (budget.max_seconds <= 0.0)
            throw Error(ErrorKind::budget, "solver time budget exhausted before T = " + std::to_string(T));
        const SolveResult res = solve_with(opts.solver, model, budget);
        st.decisions += res.stats.decisions;
        st.conflicts += res.stats.conflicts;
        st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (res.status == SolveStatus::budget_exhausted)
            throw Error(ErrorKind::budget, "solver budget exhausted at T = " + std::to_string(T));
        if (res.status == SolveStatus::infeasible) continue;

        DiscretePlan plan;
        plan.makespan_steps = T;
        plan.paths.assign(di.size(), {});
        for (std::size_t i = 0; i < di.size(); ++i) plan.paths[i].assign(idx(T + 1), -1);
        for (std::size_t i = 0; i < di.size(); ++i) plan.paths[i][0] = di.start_node[i];
        for (std::size_t k = 0; k < tx->arcs.size(); ++k) {
            if (!res.assignment[k]) continue;
            const Arc& a = tx->arcs[k];
            plan.paths[idx(a.robot)][idx(a.t + 1)] = a.v;
        }
        if (auto bad = check_discrete_plan(plan, di))
            throw Error(ErrorKind::internal, "solver produced an invalid plan: " + *bad);
        return plan;
    }
    st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    throw Error(ErrorKind::timeout, "no plan with at most " + std::to_string(max_T) + " steps");
}

}  // namespace hexaplan
