#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hexaplan/bench.hpp"
#include "hexaplan/error.hpp"
#include "hexaplan/ilp.hpp"
#include "hexaplan/pipeline.hpp"
#include "hexaplan/render.hpp"
#include "hexaplan/suite.hpp"

using namespace hexaplan;

namespace {

// --env takes a JSON file or the name of a bundled environment.
Environment resolve_env(const std::string& arg, double radius) {
    if (std::filesystem::exists(arg)) return load_environment(arg);
    for (const auto& name : suite_names())
        if (name == arg) return suite_environment(name, radius);
    throw Error(ErrorKind::input, "no such environment file or suite name: " + arg);
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::input, "cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::input, path + ": " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw Error(ErrorKind::input, "cannot write " + path);
}

SolverConfig solver_config(const std::string& flag) {
    const char* env = std::getenv("HEXAPLAN_SOLVER");
    return SolverConfig::parse(env && *env ? env : flag);
}

struct Common {
    std::string env;
    std::string tiling = "hexagonal";
    double epsilon = 1e-3;
    double radius = 1.0;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--env", env, "environment JSON or bundled name")->required();
        cmd->add_option("--tiling", tiling, "hexagonal, square or triangular");
        cmd->add_option("--epsilon", epsilon, "relative slack on the lattice side");
    }
    PlanConfig config() const {
        PlanConfig pc;
        pc.tiling = tiling_kind_from_string(tiling);
        pc.epsilon = epsilon;
        return pc;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-robot motion planning on lattice roadmaps"};
    app.require_subcommand(1);

    Common common;
    int k = 0;
    bool auto_k_flag = false;
    std::string solver = "bundled";
    std::uint64_t seed = 0;
    double budget_seconds = 300.0;
    long long budget_decisions = 10'000'000;
    std::string out_path, svg_path, instance_path, plan_path;
    bool timing = false;

    auto* plan_cmd = app.add_subcommand("plan", "plan a continuous motion for an instance");
    common.add_to(plan_cmd);
    plan_cmd->add_option("--instance", instance_path, "instance JSON")->required();
    auto* k_opt = plan_cmd->add_option("--k", k, "number of time-split pieces")->check(CLI::PositiveNumber);
    plan_cmd->add_flag("--auto-k", auto_k_flag, "choose the split count from the makespan bound")->excludes(k_opt);
    plan_cmd->add_option("--solver", solver, "bundled or external:<command>");
    plan_cmd->add_option("--seed", seed, "solver seed");
    plan_cmd->add_option("--budget-seconds", budget_seconds, "solver wall-clock budget");
    plan_cmd->add_option("--budget-decisions", budget_decisions, "solver decision budget");
    plan_cmd->add_option("-o,--output", out_path, "plan JSON (stdout when omitted)");
    plan_cmd->add_option("--svg", svg_path, "also render the plan");
    plan_cmd->add_flag("--timing", timing, "include phase timings in the report");

    int gen_n = 1;
    double gen_sep = 2.5;
    auto* gen_cmd = app.add_subcommand("gen", "random instance in an environment");
    gen_cmd->add_option("--env", common.env, "environment JSON or bundled name")->required();
    gen_cmd->add_option("-n,--robots", gen_n, "robot count")->required()->check(CLI::NonNegativeNumber);
    gen_cmd->add_option("--min-sep", gen_sep, "separation among starts and among goals, in radii");
    gen_cmd->add_option("--seed", seed, "generator seed");
    gen_cmd->add_option("-o,--output", out_path, "instance JSON");

    BenchConfig bench;
    bool no_runtime = false;
    auto* bench_cmd = app.add_subcommand("bench", "sweep robot counts and split heuristics, CSV out");
    bench_cmd->add_option("--env", bench.envs, "bundled environment names")->delimiter(',');
    bench_cmd->add_option("--robots", bench.robot_counts, "robot counts")->delimiter(',');
    bench_cmd->add_option("--heuristics", bench.heuristics, "baseline, N-way or auto")->delimiter(',');
    bench_cmd->add_option("--seeds", bench.seeds, "instances per cell");
    bench_cmd->add_option("--first-seed", bench.first_seed, "seed of the first instance");
    bench_cmd->add_option("--min-sep", bench.min_separation, "instance separation in radii");
    bench_cmd->add_option("--solver", solver, "bundled or external:<command>");
    bench_cmd->add_option("--budget-seconds", budget_seconds, "per-instance solver budget");
    bench_cmd->add_flag("--no-runtime", no_runtime, "write '-' in the runtime column");
    bench_cmd->add_option("-o,--output", out_path, "CSV file (stdout when omitted)");

    bool no_roadmap = false;
    auto* render_cmd = app.add_subcommand("render", "SVG of an environment, roadmap, instance and plan");
    common.add_to(render_cmd);
    render_cmd->add_option("--instance", instance_path, "instance JSON");
    render_cmd->add_option("--plan", plan_path, "plan JSON");
    render_cmd->add_flag("--no-roadmap", no_roadmap, "skip the roadmap layer");
    render_cmd->add_option("-o,--output", out_path, "SVG file (stdout when omitted)");

    bool dump_roadmap = false;
    auto* lattice_cmd = app.add_subcommand("lattice", "dump the lattice or the restored roadmap as JSON");
    common.add_to(lattice_cmd);
    lattice_cmd->add_flag("--roadmap", dump_roadmap, "dump the roadmap after restoration instead");
    lattice_cmd->add_option("-o,--output", out_path, "JSON file (stdout when omitted)");

    std::string env_name;
    auto* env_cmd = app.add_subcommand("env", "write a bundled environment as JSON");
    env_cmd->add_option("name", env_name, "empty, plus, jack, triangles or bars")->required();
    env_cmd->add_option("-o,--output", out_path, "JSON file (stdout when omitted)");

    int lp_T = -1;
    auto* lp_cmd = app.add_subcommand("export-lp", "write the time-expanded model of an instance in LP format");
    common.add_to(lp_cmd);
    lp_cmd->add_option("--instance", instance_path, "instance JSON")->required();
    lp_cmd->add_option("--T", lp_T, "time steps (default: the makespan lower bound)");
    lp_cmd->add_option("-o,--output", out_path, "LP file (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_code(ErrorKind::input);
    }

    try {
        if (*plan_cmd) {
            const Environment env = resolve_env(common.env, common.radius);
            const Instance inst = load_instance(instance_path);
            PlanConfig pc = common.config();
            pc.k = auto_k_flag ? 0 : (k > 0 ? k : 1);
            pc.solver = solver_config(solver);
            pc.budget.seed = seed;
            pc.budget.max_seconds = budget_seconds;
            pc.budget.max_decisions = budget_decisions;
            const PlanResult res = plan(env, inst, pc);
            for (const auto& w : res.report.warnings) std::cerr << "warning: " << w << "\n";
            write_text(out_path, plan_to_json(res.plan, res.report, timing).dump(1) + "\n");
            if (!svg_path.empty()) {
                const CSpace cs = compute_cspace(env, env.robot_radius);
                write_text(svg_path, render_svg({&env, &cs, res.roadmap.get(), &inst, &res.plan}));
            }
        } else if (*gen_cmd) {
            const Environment env = resolve_env(common.env, 1.0);
            write_text(out_path, gen_instance(env, gen_n, gen_sep, seed).to_json().dump(1) + "\n");
        } else if (*bench_cmd) {
            bench.plan.solver = solver_config(solver);
            bench.plan.budget.max_seconds = budget_seconds;
            std::ofstream file;
            if (!out_path.empty() && out_path != "-") {
                file.open(out_path, std::ios::binary);
                if (!file) throw Error(ErrorKind::input, "cannot write " + out_path);
            }
            std::ostream& out = file.is_open() ? static_cast<std::ostream&>(file) : std::cout;
            out << bench_csv_header() << "\n" << std::flush;
            run_bench(bench, [&](const BenchRow& row) { out << bench_csv_row(row, !no_runtime) << "\n" << std::flush; });
        } else if (*render_cmd) {
            const Environment env = resolve_env(common.env, common.radius);
            const CSpace cs = compute_cspace(env, env.robot_radius);
            std::optional<Roadmap> rm;
            if (!no_roadmap) rm = build_roadmap(cs, PathFinder(cs), common.config(), env.robot_radius);
            std::optional<Instance> inst;
            if (!instance_path.empty()) inst = load_instance(instance_path);
            std::optional<ContinuousPlan> plan;
            if (!plan_path.empty()) plan = plan_from_json(read_json(plan_path));
            write_text(out_path, render_svg({&env, &cs, rm ? &*rm : nullptr, inst ? &*inst : nullptr,
                                             plan ? &*plan : nullptr}));
        } else if (*lattice_cmd) {
            const Environment env = resolve_env(common.env, common.radius);
            const CSpace cs = compute_cspace(env, env.robot_radius);
            const PlanConfig pc = common.config();
            nlohmann::json doc;
            if (dump_roadmap) {
                doc = roadmap_to_json(build_roadmap(cs, PathFinder(cs), pc, env.robot_radius));
            } else {
                doc = lattice_to_json(
                    impose_lattice(cs, TilingSpec::minimal(pc.tiling, env.robot_radius, pc.epsilon), pc.offset));
            }
            write_text(out_path, doc.dump() + "\n");
        } else if (*env_cmd) {
            write_text(out_path, suite_environment(env_name).to_json().dump(1) + "\n");
        } else if (*lp_cmd) {
            const Environment env = resolve_env(common.env, common.radius);
            const Instance inst = load_instance(instance_path);
            const CSpace cs = compute_cspace(env, env.robot_radius);
            const Roadmap rm = build_roadmap(cs, PathFinder(cs), common.config(), env.robot_radius);
            const DiscreteInstance di = snap(inst, rm, cs);
            const int T = lp_T >= 0 ? lp_T : underestimate_T(di);
            const auto tx = time_expand(di, T, reachable_sets(di, T));
            if (!tx) throw Error(ErrorKind::infeasible, "no robot can reach its goal in " + std::to_string(T) + " steps");
            write_text(out_path, export_lp(build_ilp(*tx, di)));
        }
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what();
        if (e.robot()) std::cerr << " [robot " << *e.robot() << "]";
        std::cerr << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error (internal): " << e.what() << "\n";
        return 1;
    }
    return 0;
}
