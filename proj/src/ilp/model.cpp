#include <algorithm>
#include <set>
#include <tuple>

#include "hexaplan/error.hpp"
#include "hexaplan/ilp.hpp"

namespace hexaplan {

const char* to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::feasible: return "feasible";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::budget_exhausted: return "budget_exhausted";
    }
    return "?";
}

int IlpModel::add_var() {
    if (!tags.empty()) throw Error(ErrorKind::internal, "untagged variable added to a tagged model");
    return num_vars++;
}

int IlpModel::add_var(VarTag tag) {
    if (static_cast<int>(tags.size()) != num_vars) throw Error(ErrorKind::internal, "tagged variable added to an untagged model");
    tags.push_back(tag);
    return num_vars++;
}

void IlpModel::add_constraint(std::vector<Term> terms, Relation rel, long long rhs) {
    constraints.push_back({std::move(terms), rel, rhs});
}

void IlpModel::validate() const {
    if (num_vars < 0) throw Error(ErrorKind::input, "negative variable count");
    if (!tags.empty() && static_cast<int>(tags.size()) != num_vars)
        throw Error(ErrorKind::input, "tag table size does not match the variable count");
    std::vector<char> used(static_cast<std::size_t>(num_vars), 0);
    for (std::size_t c = 0; c < constraints.size(); ++c) {
        if (constraints[c].terms.empty()) throw Error(ErrorKind::input, "constraint " + std::to_string(c) + " has no terms");
        for (const Term& t : constraints[c].terms) {
            if (t.var < 0 || t.var >= num_vars)
                throw Error(ErrorKind::input, "constraint " + std::to_string(c) + " uses unknown variable " + std::to_string(t.var));
            used[static_cast<std::size_t>(t.var)] = 1;
        }
    }
    for (int v = 0; v < num_vars; ++v)
        if (!used[static_cast<std::size_t>(v)]) throw Error(ErrorKind::input, "variable " + var_name(v) + " is in no constraint");
    std::set<std::tuple<int, int, int, int>> seen;
    for (const VarTag& t : tags)
        if (!seen.emplace(t.robot, t.u, t.v, t.t).second) throw Error(ErrorKind::input, "duplicate variable tag");
}

bool IlpModel::satisfied_by(const std::vector<std::uint8_t>& x) const {
    if (static_cast<int>(x.size()) != num_vars) return false;
    for (const Constraint& c : constraints) {
        long long lhs = 0;
        for (const Term& t : c.terms) lhs += t.coef * x[static_cast<std::size_t>(t.var)];
        switch (c.rel) {
            case Relation::le: if (lhs > c.rhs) return false; break;
            case Relation::eq: if (lhs != c.rhs) return false; break;
            case Relation::ge: if (lhs < c.rhs) return false; break;
        }
    }
    return true;
}

std::string IlpModel::var_name(int var) const {
    if (tags.empty()) return "x" + std::to_string(var);
    const VarTag& t = tags[static_cast<std::size_t>(var)];
    return "x_r" + std::to_string(t.robot) + "_" + std::to_string(t.u) + "_" + std::to_string(t.v) + "_t" + std::to_string(t.t);
}

}  // namespace hexaplan
