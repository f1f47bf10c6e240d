#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hexaplan {

enum class Relation { le, eq, ge };

struct Term {
    int var;
    long long coef;
};

struct Constraint {
    std::vector<Term> terms;
    Relation rel = Relation::le;
    long long rhs = 0;
};

/// Arc tag for a time-expansion variable: robot moves u -> v between t, t+1.
struct VarTag {
    int robot = -1;
    int u = -1;
    int v = -1;
    int t = -1;
};

/// 0/1 feasibility model.
struct IlpModel {
    int num_vars = 0;
    std::vector<Constraint> constraints;
    std::vector<VarTag> tags;  // empty, or one per variable

    int add_var();
    int add_var(VarTag tag);
    void add_constraint(std::vector<Term> terms, Relation rel, long long rhs);

    /// Throws Error(input) for out-of-range vars, empty constraints, unused
    /// variables, duplicate tags, or a tag table of the wrong size.
    void validate() const;
    bool satisfied_by(const std::vector<std::uint8_t>& x) const;

    std::string var_name(int var) const;
};

enum class SolveStatus { feasible, infeasible, budget_exhausted };

const char* to_string(SolveStatus status);

struct SolveBudget {
    long long max_decisions = 10'000'000;
    double max_seconds = 300.0;
    std::uint64_t seed = 0;
};

struct SolveStats {
    long long decisions = 0;
    long long conflicts = 0;
    long long propagations = 0;
    long long restarts = 0;
    double seconds = 0.0;
};

struct SolveResult {
    SolveStatus status = SolveStatus::infeasible;
    std::vector<std::uint8_t> assignment;  // filled when feasible
    SolveStats stats;
};

/// Bundled solver: conflict-driven backtracking over the 0/1 variables with
/// propagation on every linear constraint.
SolveResult solve_feasibility(const IlpModel& model, const SolveBudget& budget = {});

/// CPLEX LP text. Variable names come from tags when present.
std::string export_lp(const IlpModel& model);

/// Reads "name value" lines. Returns nullopt when the text says the model
/// is infeasible. Throws Error(input) on unknown names or bad values.
std::optional<std::vector<std::uint8_t>> import_solution(const IlpModel& model, std::istream& in);

struct SolverConfig {
    enum class Kind { bundled, external } kind = Kind::bundled;
    std::string command;  // for external: run as `<command> model.lp solution.txt`

    static SolverConfig parse(const std::string& spec);
    std::string describe() const;
};

/// Dispatches to the bundled solver or an external command. External
/// answers are re-checked against every constraint.
SolveResult solve_with(const SolverConfig& config, const IlpModel& model, const SolveBudget& budget = {});

}  // namespace hexaplan
