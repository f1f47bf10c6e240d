#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "hexaplan/error.hpp"
#include "hexaplan/ilp.hpp"

namespace hexaplan {

namespace fs = std::filesystem;

SolverConfig SolverConfig::parse(const std::string& spec) {
    SolverConfig cfg;
    if (spec.empty() || spec == "bundled") return cfg;
    const std::string prefix = "external:";
    if (spec.rfind(prefix, 0) == 0 && spec.size() > prefix.size()) {
        cfg.kind = Kind::external;
        cfg.command = spec.substr(prefix.size());
        return cfg;
    }
    throw Error(ErrorKind::input, "unknown solver '" + spec + "' (expected bundled or external:<command>)");
}

std::string SolverConfig::describe() const { return kind == Kind::bundled ? "bundled" : "external:" + command; }

namespace {

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'')
            out += "'\\''";
        else
            out += c;
    }
    return out + "'";
}

SolveResult solve_external(const std::string& command, const IlpModel& model) {
    model.validate();
    const auto start = std::chrono::steady_clock::now();
    std::random_device rd;
    const fs::path dir = fs::temp_directory_path() / ("hexaplan-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(dir);
    const fs::path lp = dir / "model.lp";
    const fs::path sol = dir / "solution.txt";
    {
        std::ofstream out(lp);
        out << export_lp(model);
    }
    const std::string cmd = command + " " + shell_quote(lp.string()) + " " + shell_quote(sol.string());
    const int rc = std::system(cmd.c_str());

    SolveResult result;
    std::ifstream in(sol);
    if (!in) {
        fs::remove_all(dir);
        if (rc != 0) throw Error(ErrorKind::internal, "external solver failed (status " + std::to_string(rc) + "): " + command);
        result.status = SolveStatus::infeasible;
    } else {
        std::string first;
        in >> first;
        if (first.empty()) {
            result.status = SolveStatus::infeasible;
        } else if (first == "timeout" || first == "TIMEOUT") {
            result.status = SolveStatus::budget_exhausted;
        } else {
            in.clear();
            in.seekg(0);
            auto x = import_solution(model, in);
            if (!x) {
                result.status = SolveStatus::infeasible;
            } else {
                if (!model.satisfied_by(*x)) {
                    fs::remove_all(dir);
                    throw Error(ErrorKind::internal, "external solver returned an assignment that violates the model");
                }
                result.status = SolveStatus::feasible;
                result.assignment = std::move(*x);
            }
        }
    }
    fs::remove_all(dir);
    result.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace

SolveResult solve_with(const SolverConfig& config, const IlpModel& model, const SolveBudget& budget) {
    if (config.kind == SolverConfig::Kind::bundled) return solve_feasibility(model, budget);
    return solve_external(config.command, model);
}

}  // namespace hexaplan
