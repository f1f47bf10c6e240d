#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include "hexaplan/error.hpp"
#include "hexaplan/ilp.hpp"

namespace hexaplan {

namespace {

// Literal encoding: 2 * var for x, 2 * var + 1 for not-x.
using Lit = int;
inline int var_of(Lit l) { return l >> 1; }
inline Lit negate(Lit l) { return l ^ 1; }

struct PbCons {
    std::vector<std::pair<Lit, long long>> terms;  // sum of coef over true literals <= bound
    long long bound = 0;
    long long max_coef = 0;
    long long sum_true = 0;
};

struct Clause {
    std::vector<Lit> lits;
    double activity = 0.0;
    bool removed = false;
};

enum class ReasonKind : std::uint8_t { none, pb, clause };

struct Reason {
    ReasonKind kind = ReasonKind::none;
    int id = -1;
};

double luby(double y, int x) {
    int size = 1, seq = 0;
    while (size < x + 1) {
        ++seq;
        size = 2 * size + 1;
    }
    while (size - 1 != x) {
        size = (size - 1) >> 1;
        --seq;
        x = x % size;
    }
    return std::pow(y, seq);
}

std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class VarHeap {
public:
    explicit VarHeap(const std::vector<double>& act) : act_(act), pos_(act.size(), -1) {}

    bool empty() const { return heap_.empty(); }
    bool contains(int v) const { return pos_[static_cast<std::size_t>(v)] >= 0; }

    void insert(int v) {
        if (contains(v)) return;
        pos_[static_cast<std::size_t>(v)] = static_cast<int>(heap_.size());
        heap_.push_back(v);
        up(static_cast<int>(heap_.size()) - 1);
    }
    void increased(int v) {
        if (contains(v)) up(pos_[static_cast<std::size_t>(v)]);
    }
    int pop() {
        const int top = heap_.front();
        heap_.front() = heap_.back();
        pos_[static_cast<std::size_t>(heap_.front())] = 0;
        heap_.pop_back();
        pos_[static_cast<std::size_t>(top)] = -1;
        if (!heap_.empty()) down(0);
        return top;
    }

private:
    bool before(int a, int b) const {
        const double x = act_[static_cast<std::size_t>(a)], y = act_[static_cast<std::size_t>(b)];
        return x > y || (x == y && a < b);
    }
    void place(int i, int v) {
        heap_[static_cast<std::size_t>(i)] = v;
        pos_[static_cast<std::size_t>(v)] = i;
    }
    void up(int i) {
        const int v = heap_[static_cast<std::size_t>(i)];
        while (i > 0) {
            const int parent = (i - 1) / 2;
            if (!before(v, heap_[static_cast<std::size_t>(parent)])) break;
            place(i, heap_[static_cast<std::size_t>(parent)]);
            i = parent;
        }
        place(i, v);
    }
    void down(int i) {
        const int v = heap_[static_cast<std::size_t>(i)];
        const int n = static_cast<int>(heap_.size());
        while (true) {
            int child = 2 * i + 1;
            if (child >= n) break;
            if (child + 1 < n && before(heap_[static_cast<std::size_t>(child + 1)], heap_[static_cast<std::size_t>(child)])) ++child;
            if (!before(heap_[static_cast<std::size_t>(child)], v)) break;
            place(i, heap_[static_cast<std::size_t>(child)]);
            i = child;
        }
        place(i, v);
    }

    const std::vector<double>& act_;
    std::vector<int> heap_;
    std::vector<int> pos_;
};

class PbSolver {
public:
    PbSolver(const IlpModel& model, const SolveBudget& budget)
        : n_(model.num_vars), budget_(budget), value_(static_cast<std::size_t>(n_), -1),
          level_(static_cast<std::size_t>(n_), 0), trail_pos_(static_cast<std::size_t>(n_), 0),
          reason_(static_cast<std::size_t>(n_)), occ_(static_cast<std::size_t>(2 * n_)),
          watches_(static_cast<std::size_t>(2 * n_)), activity_(static_cast<std::size_t>(n_), 0.0),
          phase_(static_cast<std::size_t>(n_), 1), seen_(static_cast<std::size_t>(n_), 0), heap_(activity_) {
        load(model);
    }

    SolveResult run();

private:
    void load(const IlpModel& model);
    void add_pb(std::map<int, long long> coefs, long long bound);

    int lit_value(Lit l) const {
        const int v = value_[static_cast<std::size_t>(var_of(l))];
        return v < 0 ? -1 : (v ^ (l & 1));
    }
    int decision_level() const { return static_cast<int>(trail_lim_.size()); }

    void assign(Lit l, Reason why);
    // Returns the conflicting literal set (all false) or an empty vector.
    bool propagate(std::vector<Lit>& conflict);
    void cancel_until(int level);
    void pb_explain(int c, Lit implied, std::vector<Lit>& out) const;
    void reason_lits(int v, std::vector<Lit>& out) const;
    void analyze(std::vector<Lit> conflict, std::vector<Lit>& learnt, int& backjump);
    bool redundant(Lit q) const;
    void bump_var(int v);
    void bump_clause(int c);
    void reduce_db();
    int add_clause(std::vector<Lit> lits);
    bool out_of_time();

    int n_;
    SolveBudget budget_;
    bool trivially_false_ = false;
    std::vector<int> value_;
    std::vector<int> level_;
    std::vector<int> trail_pos_;
    std::vector<Reason> reason_;
    std::vector<Lit> trail_;
    std::vector<int> trail_lim_;
    std::size_t qhead_ = 0;

    std::vector<PbCons> pbs_;
    std::vector<std::vector<std::pair<int, long long>>> occ_;
    std::vector<Clause> clauses_;
    std::vector<int> learnt_ids_;
    std::vector<std::vector<int>> watches_;

    std::vector<double> activity_;
    double var_inc_ = 1.0;
    double clause_inc_ = 1.0;
    std::vector<std::int8_t> phase_;
    std::vector<char> seen_;
    VarHeap heap_;

    SolveStats stats_;
    std::chrono::steady_clock::time_point start_;
    std::size_t max_learnts_ = 0;
};

void PbSolver::add_pb(std::map<int, long long> coefs, long long bound) {
    PbCons k;
    long long total = 0;
    for (const auto& [v, c] : coefs) {
        if (c == 0) continue;
        if (c > 0) {
            k.terms.emplace_back(2 * v, c);
        } else {
            // c x = c - c (1 - x): a positive weight on not-x.
            k.terms.emplace_back(2 * v + 1, -c);
            bound -= c;
        }
        total += std::abs(c);
    }
    if (bound < 0) {
        trivially_false_ = true;
        return;
    }
    if (total <= bound) return;
    for (auto& [l, c] : k.terms) {
        c = std::min(c, bound + 1);
        k.max_coef = std::max(k.max_coef, c);
    }
    k.bound = bound;
    const int id = static_cast<int>(pbs_.size());
    for (const auto& [l, c] : k.terms) {
        occ_[static_cast<std::size_t>(l)].emplace_back(id, c);
        activity_[static_cast<std::size_t>(var_of(l))] += 1.0;
    }
    pbs_.push_back(std::move(k));
}

void PbSolver::load(const IlpModel& model) {
    for (const Constraint& c : model.constraints) {
        std::map<int, long long> merged;
        for (const Term& t : c.terms) merged[t.var] += t.coef;
        if (c.rel == Relation::le || c.rel == Relation::eq) add_pb(merged, c.rhs);
        if (c.rel == Relation::ge || c.rel == Relation::eq) {
            std::map<int, long long> flipped;
            for (const auto& [v, k] : merged) flipped[v] = -k;
            add_pb(std::move(flipped), -c.rhs);
        }
    }
    // Seeded jitter below one occurrence only reorders ties.
    if (budget_.seed != 0)
        for (int v = 0; v < n_; ++v)
            activity_[static_cast<std::size_t>(v)] +=
                0.5 * static_cast<double>(mix(budget_.seed * 0x100000001b3ULL + static_cast<std::uint64_t>(v)) >> 11) * 0x1.0p-53;
    for (int v = 0; v < n_; ++v) heap_.insert(v);
    max_learnts_ = std::max<std::size_t>(4000, pbs_.size() / 3);
}

void PbSolver::assign(Lit l, Reason why) {
    const int v = var_of(l);
    value_[static_cast<std::size_t>(v)] = (l & 1) ? 0 : 1;
    level_[static_cast<std::size_t>(v)] = decision_level();
    trail_pos_[static_cast<std::size_t>(v)] = static_cast<int>(trail_.size());
    reason_[static_cast<std::size_t>(v)] = why;
    trail_.push_back(l);
    for (const auto& [c, a] : occ_[static_cast<std::size_t>(l)]) pbs_[static_cast<std::size_t>(c)].sum_true += a;
}

void PbSolver::cancel_until(int level) {
    if (decision_level() <= level) return;
    const std::size_t keep = static_cast<std::size_t>(trail_lim_[static_cast<std::size_t>(level)]);
    for (std::size_t i = trail_.size(); i-- > keep;) {
        const Lit l = trail_[i];
        const int v = var_of(l);
        for (const auto& [c, a] : occ_[static_cast<std::size_t>(l)]) pbs_[static_cast<std::size_t>(c)].sum_true -= a;
        phase_[static_cast<std::size_t>(v)] = static_cast<std::int8_t>(value_[static_cast<std::size_t>(v)]);
        value_[static_cast<std::size_t>(v)] = -1;
        reason_[static_cast<std::size_t>(v)] = {};
        heap_.insert(v);
    }
    trail_.resize(keep);
    trail_lim_.resize(static_cast<std::size_t>(level));
    qhead_ = std::min(qhead_, keep);
}

bool PbSolver::propagate(std::vector<Lit>& conflict) {
    while (qhead_ < trail_.size()) {
        const Lit p = trail_[qhead_++];
        ++stats_.propagations;
        for (const auto& [c, a] : occ_[static_cast<std::size_t>(p)]) {
            const PbCons& k = pbs_[static_cast<std::size_t>(c)];
            const long long slack = k.bound - k.sum_true;
            if (slack < 0) {
                conflict.clear();
                // Smallest trail prefix of true literals that overshoots the bound.
                std::vector<std::pair<int, std::size_t>> trues;
                for (std::size_t t = 0; t < k.terms.size(); ++t)
                    if (lit_value(k.terms[t].first) == 1)
                        trues.emplace_back(trail_pos_[static_cast<std::size_t>(var_of(k.terms[t].first))], t);
                std::sort(trues.begin(), trues.end());
                long long sum = 0;
                for (const auto& [pos, t] : trues) {
                    conflict.push_back(negate(k.terms[t].first));
                    sum += k.terms[t].second;
                    if (sum > k.bound) break;
                }
                return false;
            }
            if (slack >= k.max_coef) continue;
            for (const auto& [l, b] : k.terms)
                if (b > slack && lit_value(l) < 0) assign(negate(l), {ReasonKind::pb, c});
        }

        const Lit falsified = negate(p);
        auto& ws = watches_[static_cast<std::size_t>(falsified)];
        std::size_t i = 0, j = 0;
        while (i < ws.size()) {
            const int cid = ws[i++];
            Clause& cl = clauses_[static_cast<std::size_t>(cid)];
            if (cl.removed) continue;
            if (cl.lits[0] == falsified) std::swap(cl.lits[0], cl.lits[1]);
            if (lit_value(cl.lits[0]) == 1) {
                ws[j++] = cid;
                continue;
            }
            bool moved = false;
            for (std::size_t k = 2; k < cl.lits.size(); ++k)
                if (lit_value(cl.lits[k]) != 0) {
                    std::swap(cl.lits[1], cl.lits[k]);
                    watches_[static_cast<std::size_t>(cl.lits[1])].push_back(cid);
                    moved = true;
                    break;
                }
            if (moved) continue;
            ws[j++] = cid;
            if (lit_value(cl.lits[0]) == 0) {
                while (i < ws.size()) ws[j++] = ws[i++];
                ws.resize(j);
                conflict = cl.lits;
                return false;
            }
            assign(cl.lits[0], {ReasonKind::clause, cid});
        }
        ws.resize(j);
    }
    return true;
}

void PbSolver::pb_explain(int c, Lit implied, std::vector<Lit>& out) const {
    const PbCons& k = pbs_[static_cast<std::size_t>(c)];
    const int limit = trail_pos_[static_cast<std::size_t>(var_of(implied))];
    long long coef = 0;
    std::vector<std::pair<int, std::pair<Lit, long long>>> trues;
    for (const auto& [l, b] : k.terms) {
        if (l == negate(implied)) coef = b;
        if (lit_value(l) == 1 && trail_pos_[static_cast<std::size_t>(var_of(l))] < limit)
            trues.push_back({trail_pos_[static_cast<std::size_t>(var_of(l))], {l, b}});
    }
    std::sort(trues.begin(), trues.end());
    out.clear();
    out.push_back(implied);
    long long sum = 0;
    for (const auto& [pos, lb] : trues) {
        out.push_back(negate(lb.first));
        sum += lb.second;
        if (sum > k.bound - coef) break;
    }
}

void PbSolver::reason_lits(int v, std::vector<Lit>& out) const {
    const Reason& r = reason_[static_cast<std::size_t>(v)];
    const Lit implied = value_[static_cast<std::size_t>(v)] == 1 ? 2 * v : 2 * v + 1;
    if (r.kind == ReasonKind::pb) {
        pb_explain(r.id, implied, out);
    } else {
        out = clauses_[static_cast<std::size_t>(r.id)].lits;
    }
}

void PbSolver::bump_var(int v) {
    double& a = activity_[static_cast<std::size_t>(v)];
    a += var_inc_;
    if (a > 1e100) {
        for (double& x : activity_) x *= 1e-100;
        var_inc_ *= 1e-100;
    }
    heap_.increased(v);
}

void PbSolver::bump_clause(int c) {
    double& a = clauses_[static_cast<std::size_t>(c)].activity;
    a += clause_inc_;
    if (a > 1e20) {
        for (int id : learnt_ids_) clauses_[static_cast<std::size_t>(id)].activity *= 1e-20;
        clause_inc_ *= 1e-20;
    }
}

bool PbSolver::redundant(Lit q) const {
    const int v = var_of(q);
    if (reason_[static_cast<std::size_t>(v)].kind == ReasonKind::none) return false;
    std::vector<Lit> lits;
    reason_lits(v, lits);
    for (std::size_t i = 1; i < lits.size(); ++i) {
        const int u = var_of(lits[i]);
        if (!seen_[static_cast<std::size_t>(u)] && level_[static_cast<std::size_t>(u)] > 0) return false;
    }
    return true;
}

void PbSolver::analyze(std::vector<Lit> lits, std::vector<Lit>& learnt, int& backjump) {
    learnt.assign(1, -1);
    std::vector<int> touched;
    int path = 0;
    Lit p = -1;
    std::size_t idx = trail_.size();
    while (true) {
        for (Lit q : lits) {
            if (q == p) continue;
            const int v = var_of(q);
            if (seen_[static_cast<std::size_t>(v)] || level_[static_cast<std::size_t>(v)] == 0) continue;
            seen_[static_cast<std::size_t>(v)] = 1;
            touched.push_back(v);
            bump_var(v);
            if (level_[static_cast<std::size_t>(v)] == decision_level())
                ++path;
            else
                learnt.push_back(q);
        }
        do {
            --idx;
        } while (!seen_[static_cast<std::size_t>(var_of(trail_[idx]))]);
        p = trail_[idx];
        seen_[static_cast<std::size_t>(var_of(p))] = 0;
        if (--path == 0) break;
        const Reason& r = reason_[static_cast<std::size_t>(var_of(p))];
        if (r.kind == ReasonKind::clause) bump_clause(r.id);
        reason_lits(var_of(p), lits);
    }
    learnt[0] = negate(p);

    std::size_t keep = 1;
    for (std::size_t i = 1; i < learnt.size(); ++i)
        if (!redundant(learnt[i])) learnt[keep++] = learnt[i];
    learnt.resize(keep);
    for (int v : touched) seen_[static_cast<std::size_t>(v)] = 0;

    backjump = 0;
    if (learnt.size() > 1) {
        std::size_t best = 1;
        for (std::size_t i = 2; i < learnt.size(); ++i)
            if (level_[static_cast<std::size_t>(var_of(learnt[i]))] > level_[static_cast<std::size_t>(var_of(learnt[best]))]) best = i;
        std::swap(learnt[1], learnt[best]);
        backjump = level_[static_cast<std::size_t>(var_of(learnt[1]))];
    }
    var_inc_ /= 0.95;
    clause_inc_ /= 0.999;
}

int PbSolver::add_clause(std::vector<Lit> lits) {
    const int id = static_cast<int>(clauses_.size());
    watches_[static_cast<std::size_t>(lits[0])].push_back(id);
    watches_[static_cast<std::size_t>(lits[1])].push_back(id);
    clauses_.push_back({std::move(lits), 0.0, false});
    learnt_ids_.push_back(id);
    bump_clause(id);
    return id;
}

void PbSolver::reduce_db() {
    std::vector<int> candidates;
    for (int id : learnt_ids_) {
        const Clause& cl = clauses_[static_cast<std::size_t>(id)];
        if (cl.removed || cl.lits.size() <= 2) continue;
        const int v = var_of(cl.lits[0]);
        const Reason& r = reason_[static_cast<std::size_t>(v)];
        if (r.kind == ReasonKind::clause && r.id == id && lit_value(cl.lits[0]) == 1) continue;  // locked
        candidates.push_back(id);
    }
    std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
        const double x = clauses_[static_cast<std::size_t>(a)].activity, y = clauses_[static_cast<std::size_t>(b)].activity;
        return x < y || (x == y && a < b);
    });
    for (std::size_t i = 0; i < candidates.size() / 2; ++i) {
        Clause& cl = clauses_[static_cast<std::size_t>(candidates[i])];
        cl.removed = true;
        cl.lits.clear();
        cl.lits.shrink_to_fit();
    }
    std::vector<int> alive;
    for (int id : learnt_ids_)
        if (!clauses_[static_cast<std::size_t>(id)].removed) alive.push_back(id);
    learnt_ids_ = std::move(alive);
    for (auto& ws : watches_)
        ws.erase(std::remove_if(ws.begin(), ws.end(), [&](int id) { return clauses_[static_cast<std::size_t>(id)].removed; }),
                 ws.end());
}

bool PbSolver::out_of_time() {
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    return elapsed > budget_.max_seconds;
}

SolveResult PbSolver::run() {
    start_ = std::chrono::steady_clock::now();
    SolveResult result;
    auto finish = [&](SolveStatus status) {
        result.status = status;
        stats_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        result.stats = stats_;
        return result;
    };
    if (trivially_false_) return finish(SolveStatus::infeasible);

    // Level-0 implications of each constraint on its own.
    for (std::size_t c = 0; c < pbs_.size(); ++c) {
        const PbCons& k = pbs_[c];
        if (k.bound >= k.max_coef) continue;
        for (const auto& [l, b] : k.terms) {
            if (b <= k.bound) continue;
            const int val = lit_value(l);
            if (val == 1) return finish(SolveStatus::infeasible);
            if (val < 0) assign(negate(l), {ReasonKind::pb, static_cast<int>(c)});
        }
    }

    std::vector<Lit> conflict;
    std::vector<Lit> learnt;
    int restart_index = 0;
    long long conflicts_until_restart = static_cast<long long>(100 * luby(2.0, restart_index));
    while (true) {
        if (!propagate(conflict)) {
            ++stats_.conflicts;
            if (decision_level() == 0) return finish(SolveStatus::infeasible);
            int backjump = 0;
            analyze(conflict, learnt, backjump);
            cancel_until(backjump);
            if (learnt.size() == 1) {
                assign(learnt[0], {});
            } else {
                const Lit first = learnt[0];
                const int id = add_clause(learnt);
                assign(first, {ReasonKind::clause, id});
            }
            if ((stats_.conflicts & 255) == 0 && out_of_time()) return finish(SolveStatus::budget_exhausted);
            if (--conflicts_until_restart <= 0) {
                ++stats_.restarts;
                ++restart_index;
                conflicts_until_restart = static_cast<long long>(100 * luby(2.0, restart_index));
                cancel_until(0);
            }
            if (learnt_ids_.size() >= max_learnts_) {
                reduce_db();
                max_learnts_ = max_learnts_ + max_learnts_ / 10;
            }
            continue;
        }
        int next = -1;
        while (!heap_.empty()) {
            const int v = heap_.pop();
            if (value_[static_cast<std::size_t>(v)] < 0) {
                next = v;
                break;
            }
        }
        if (next < 0) {
            result.assignment.resize(static_cast<std::size_t>(n_));
            for (int v = 0; v < n_; ++v) result.assignment[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(value_[static_cast<std::size_t>(v)]);
            return finish(SolveStatus::feasible);
        }
        if (++stats_.decisions > budget_.max_decisions) return finish(SolveStatus::budget_exhausted);
        if ((stats_.decisions & 1023) == 0 && out_of_time()) return finish(SolveStatus::budget_exhausted);
        trail_lim_.push_back(static_cast<int>(trail_.size()));
        assign(phase_[static_cast<std::size_t>(next)] ? 2 * next : 2 * next + 1, {});
    }
}

}  // namespace

SolveResult solve_feasibility(const IlpModel& model, const SolveBudget& budget) {
    model.validate();
    PbSolver solver(model, budget);
    SolveResult result = solver.run();
    if (result.status == SolveStatus::feasible && !model.satisfied_by(result.assignment))
        throw Error(ErrorKind::internal, "bundled solver returned an assignment that violates the model");
    return result;
}

}  // namespace hexaplan
