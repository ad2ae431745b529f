// alphaflow: command-line front end.
//
// Subcommands: validate, curvature, flow, solve, verify, export, sweep.
// Exit codes: 0 success, 1 I/O/schema/config error, 2 invalid surface,
// 3 branch violation, 4 degenerated or diverging flow, 5 max_time or
// max_iterations, 6 no stationary point.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "experiment.hpp"

namespace fs = std::filesystem;
using namespace alphaflow;
using namespace alphaflow::cli;

namespace
{

void add_surface_options(CLI::App* app, ExperimentConfig& c)
{
    app->add_option("--fixture", c.fixture, "built-in triangulation")
        ->check(CLI::IsMember(builtin_names()));
    app->add_option("--file", c.file, "triangulation document (JSON)");
    app->add_option("--weight", c.weight, "uniform edge weight Phi for fixtures, in [0, pi/2]");
    app->add_option("--branch", c.branches, "branch order at a vertex, i:order (repeatable)");
}

void add_model_options(CLI::App* app, ExperimentConfig& c)
{
    add_surface_options(app, c);
    app->add_option("--geometry", c.geometry, "euclidean | hyperbolic");
    app->add_option("--kind", c.kind,
                    "main_E | main_H | prescribed_E | prescribed_tanh_H | area_E | area_H | "
                    "sinh_variant_H");
    app->add_option("--alpha", c.alpha, "curvature exponent alpha >= 0");
    app->add_option("--normalization", c.normalization, "literal | branched | explicit=S");
    app->add_option("--rbar", c.rbar, "prescribed curvature: FILE | from-metric=PATH | const=S");
    app->add_option("--seed", c.seed, "seed for random initial metrics");
    app->add_option("--init", c.init, "initial metric: random | uniform | metric file");
}

void add_integrator_options(CLI::App* app, ExperimentConfig& c)
{
    app->add_option("--gamma", c.gamma, "constant area-flow speed (area kinds)");
    app->add_option("--method", c.method, "rk45_adaptive | rk4_fixed");
    app->add_option("--step", c.integ.step, "rk4 step / rk45 initial step");
    app->add_option("--abs-tol", c.integ.abs_tol, "rk45 absolute error tolerance");
    app->add_option("--rel-tol", c.integ.rel_tol, "rk45 relative error tolerance");
    app->add_option("--max-step", c.integ.max_step, "largest rk45 step");
    app->add_option("--max-time", c.integ.max_time, "stop with max_time beyond this t");
    app->add_option("--max-steps", c.integ.max_steps, "stop with max_time after this many steps");
    app->add_option("--tol", c.integ.convergence_tol, "convergence tolerance on ||omega||_inf");
    app->add_option("--record-every", c.integ.record_every, "keep every k-th step");
    app->add_flag("!--no-potential", c.integ.track_potential, "skip the potential column");
}

void add_solver_options(CLI::App* app, ExperimentConfig& c)
{
    app->add_option("--solve-tol", c.solver.tolerance, "Newton tolerance on ||omega||_inf");
    app->add_option("--max-iter", c.solver.max_iterations, "Newton iteration limit");
}

void write_file(const fs::path& path, const std::string& text)
{
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << text;
}

void print_properties(const std::string& suite, std::uint64_t seed, const PropertyList& ps)
{
    std::printf("suite %s, seed %llu\n", suite.c_str(), static_cast<unsigned long long>(seed));
    for (const auto& p : ps) {
        std::printf("  [%s] %s: %.6g %s %.3g over %ld samples\n", p.pass ? "ok" : "FAIL",
                    p.name.c_str(), p.measured, p.relation.c_str(), p.threshold, p.samples);
    }
    std::printf("%s\n", all_pass(ps) ? "PASS" : "FAIL");
}

int flow_exit(FlowStatus s)
{
    switch (s) {
        case FlowStatus::converged:
            return exit_code::ok;
        case FlowStatus::degenerated:
        case FlowStatus::diverging:
            return exit_code::degenerated;
        case FlowStatus::max_time:
            return exit_code::max_time;
    }
    return exit_code::failure;
}

int solve_exit(SolveStatus s)
{
    switch (s) {
        case SolveStatus::found:
            return exit_code::ok;
        case SolveStatus::no_stationary_point:
            return exit_code::no_stationary_point;
        case SolveStatus::max_iterations:
            return exit_code::max_time;
    }
    return exit_code::failure;
}

// ---- validate ----

int cmd_validate(const ExperimentConfig& c, bool check_branch, int length_bound)
{
    std::optional<TriangulationDocument> loaded;
    try {
        loaded.emplace(load_surface(c));
    }
    catch (const TopologyError& e) {
        std::printf("invalid: %s\n", e.what());
        return exit_code::invalid;
    }
    catch (const DomainError& e) {
        std::printf("invalid: %s\n", e.what());
        return exit_code::invalid;
    }
    const auto& doc = *loaded;
    const auto& wt = doc.triangulation;
    ojson rep;
    rep["valid"] = true;
    rep["vertices"] = wt.vertex_count();
    rep["edges"] = wt.edge_count();
    rep["faces"] = wt.face_count();
    rep["chi"] = euler_characteristic(wt);
    rep["max_degree"] = wt.max_degree();
    rep["total_branch_order"] = doc.branch.total_order();
    int code = exit_code::ok;
    if (check_branch) {
        const auto br = check_branch_structure(wt, doc.branch, length_bound);
        ojson b;
        b["status"] = to_string(br.status);
        b["cycles_examined"] = br.cycles_examined;
        b["length_truncated"] = br.length_truncated;
        b["count_truncated"] = br.count_truncated;
        if (br.status == BranchStatus::violated) {
            b["violating_cycle"] = br.violating_cycle;
            b["enclosed_vertices"] = br.enclosed_vertices;
            b["cycle_sum"] = br.cycle_sum;
            b["required_bound"] = br.required_bound;
            code = exit_code::branch_violation;
        }
        rep["branch_check"] = b;
    }
    std::cout << rep.dump(2) << '\n';
    return code;
}

// ---- curvature ----

int cmd_curvature(const ExperimentConfig& c)
{
    // curvatures depend on geometry and normalization only, not on the kind's rbar
    ExperimentConfig cc = c;
    if (!cc.kind.empty()) {
        cc.geometry = to_string(geometry_of(parse_potential_kind(cc.kind)));
        cc.kind.clear();
    }
    cc.rbar.clear();
    const auto e = resolve(cc);
    const auto& wt = e.doc.triangulation;
    const auto m = from_u(e.geom, e.u0);
    const auto d = curvature_detail(wt, e.geom, m.r);
    const auto field = curvature_field(wt, m, c.alpha, e.doc.branch, e.spec.normalization);
    ojson out = summary_header("curvature", cc, e);
    out["metric"] = metric_json(m);
    out["K"] = to_json(d.K);
    out["B"] = to_json(field.B);
    out["s_alpha"] = field.s_alpha;
    out["R_area"] = to_json(field.R_area);
    out["total_area"] = d.total_area;
    out["min_angle"] = d.min_angle;
    const double chi = euler_characteristic(wt);
    out["gauss_bonnet_residual"] = d.K.sum() - 2 * std::numbers::pi * chi -
                                   (e.geom == Geometry::hyperbolic ? d.total_area : 0.0);
    std::cout << out.dump(2) << '\n';
    return exit_code::ok;
}

// ---- flow ----

struct FlowOutcome {
    ojson summary;
    Trajectory traj;
};

FlowOutcome run_flow(const ExperimentConfig& c)
{
    const auto e = resolve(c);
    FlowSpec f;
    f.potential = e.spec;
    f.u0 = e.u0;
    f.gamma = e.gamma;
    IntegratorConfig ic = c.integ;
    ic.method = parse_integration_method(c.method);

    FlowOutcome out;
    out.traj = integrate(f, e.doc.triangulation, ic);
    const auto& tr = out.traj;
    ojson s = summary_header("flow", c, e);
    s["status"] = to_string(tr.status);
    s["message"] = tr.message;
    s["steps"] = tr.steps;
    s["rejected_steps"] = tr.rejected_steps;
    s["records"] = tr.records.size();
    s["t_final"] = tr.final_record().t;
    s["omega_inf_final"] = tr.final_record().omega_inf;
    s["potential_final"] = tr.final_record().potential;
    s["rate"] = rate_json(tr);
    if (uses_normalization(e.kind)) {
        s["probe"] = probe_json(
            literal_normalization_probe(f, e.doc.triangulation, tr, ic.convergence_tol));
    }
    s["diagnostics"] = diagnostics_json(diagnostics(f, e.doc.triangulation, tr));
    s["warnings"] = flow_warnings(f);
    s["final_metric"] = metric_json(from_u(e.geom, tr.final_record().u));
    out.summary = std::move(s);
    return out;
}

int cmd_flow(const ExperimentConfig& c, bool quiet)
{
    const auto res = run_flow(c);
    const fs::path dir(c.out);
    std::ostringstream traj;
    write_trajectory(traj, res.traj, res.summary);
    write_file(dir / "trajectory.jsonl", traj.str());
    write_file(dir / "summary.json", res.summary.dump(2) + "\n");
    if (!quiet) {
        std::cout << res.summary.dump(2) << '\n';
    }
    return flow_exit(res.traj.status);
}

// ---- solve ----

int cmd_solve(const ExperimentConfig& c)
{
    const auto e = resolve(c);
    SolveConfig sc = c.solver;
    sc.u0 = e.u0;
    const auto res = solve(e.spec, e.doc.triangulation, sc);
    ojson s = summary_header("solve", c, e);
    const auto body = stationary_json(res);
    for (auto it = body.begin(); it != body.end(); ++it) {
        s[it.key()] = it.value();
    }
    const fs::path dir(c.out);
    write_file(dir / "metric.json", metric_json(PackingMetric{res.geom, res.r}).dump(2) + "\n");
    write_file(dir / "solve.json", s.dump(2) + "\n");
    std::cout << s.dump(2) << '\n';
    return solve_exit(res.status);
}

// ---- verify ----

int cmd_verify(const std::string& name, std::uint64_t seed, const std::string& out)
{
    const auto* suite = find_suite(name);
    if (suite == nullptr) {
        std::fprintf(stderr, "unknown suite '%s'; available:", name.c_str());
        for (const auto& s : suites()) {
            std::fprintf(stderr, " %s", s.name.c_str());
        }
        std::fprintf(stderr, "\n");
        return exit_code::failure;
    }
    const auto props = suite->run(seed);
    print_properties(name, seed, props);
    if (!out.empty()) {
        ojson j;
        j["suite"] = name;
        j["seed"] = seed;
        j["pass"] = all_pass(props);
        for (const auto& p : props) {
            j["properties"].push_back({{"name", p.name},
                                       {"relation", p.relation},
                                       {"measured", p.measured},
                                       {"threshold", p.threshold},
                                       {"samples", p.samples},
                                       {"pass", p.pass}});
        }
        write_file(fs::path(out) / ("verify_" + name + ".json"), j.dump(2) + "\n");
    }
    return all_pass(props) ? exit_code::ok : exit_code::failure;
}

// ---- export ----

int cmd_export(const std::string& path, const std::string& format, const std::string& output)
{
    if (format != "csv") {
        throw ConfigError("unknown export format '" + format + "'");
    }
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path);
    }
    const auto f = read_trajectory(in);
    if (output.empty() || output == "-") {
        export_csv(f, std::cout);
    }
    else {
        std::ostringstream ss;
        export_csv(f, ss);
        write_file(output, ss.str());
    }
    return exit_code::ok;
}

// ---- sweep ----

int cmd_sweep(const ExperimentConfig& base, const std::vector<double>& alphas,
              const std::vector<std::uint64_t>& seeds, int workers)
{
    std::vector<ExperimentConfig> runs;
    for (double a : alphas) {
        for (auto s : seeds) {
            ExperimentConfig c = base;
            c.alpha = a;
            c.seed = s;
            c.out = (fs::path(base.out) / ("run_" + std::to_string(runs.size()))).string();
            runs.push_back(c);
        }
    }
    (void)resolve(runs.front());  // surface configuration errors before fanning out
    std::vector<ojson> summaries(runs.size());
    std::vector<std::string> errors(runs.size());
    parallel_for(
        runs.size(),
        [&](std::size_t k) {
            try {
                const auto res = run_flow(runs[k]);
                std::ostringstream traj;
                write_trajectory(traj, res.traj, res.summary);
                write_file(fs::path(runs[k].out) / "trajectory.jsonl", traj.str());
                write_file(fs::path(runs[k].out) / "summary.json", res.summary.dump(2) + "\n");
                summaries[k] = res.summary;
            }
            catch (const std::exception& e) {
                errors[k] = e.what();
            }
        },
        workers);

    // single-threaded reducer, in run order
    ojson table = ojson::array();
    for (std::size_t k = 0; k < runs.size(); ++k) {
        ojson row;
        row["run"] = k;
        row["alpha"] = runs[k].alpha;
        row["seed"] = runs[k].seed;
        if (!errors[k].empty()) {
            row["error"] = errors[k];
        }
        else {
            row["config_hash"] = summaries[k]["config_hash"];
            row["status"] = summaries[k]["status"];
            row["t_final"] = summaries[k]["t_final"];
            row["omega_inf_final"] = summaries[k]["omega_inf_final"];
            row["rate"] = summaries[k]["rate"];
        }
        table.push_back(row);
    }
    ojson out;
    out["command"] = "sweep";
    out["config_hash"] = config_hash(base.to_json());
    out["runs"] = table;
    write_file(fs::path(base.out) / "sweep.json", out.dump(2) + "\n");
    std::cout << out.dump(2) << '\n';
    for (const auto& e : errors) {
        if (!e.empty()) {
            return exit_code::failure;
        }
    }
    return exit_code::ok;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"alphaflow: branched alpha-curvature flows on weighted triangulations"};
    app.require_subcommand(1);
    ExperimentConfig cfg;

    auto* validate = app.add_subcommand("validate", "load and validate a triangulation");
    add_surface_options(validate, cfg);
    bool check_branch = false;
    int length_bound = 12;
    validate->add_flag("--check-branch", check_branch, "check the branch-structure inequality");
    validate->add_option("--cycle-length", length_bound, "longest cycle examined");

    auto* curv = app.add_subcommand("curvature", "curvatures of a metric");
    add_model_options(curv, cfg);

    auto* flow = app.add_subcommand("flow", "integrate a flow");
    add_model_options(flow, cfg);
    add_integrator_options(flow, cfg);
    flow->add_option("--out", cfg.out, "output directory");
    bool quiet = false;
    flow->add_flag("--quiet", quiet, "do not print the summary");

    auto* solve_cmd = app.add_subcommand("solve", "Newton solve for a stationary metric");
    add_model_options(solve_cmd, cfg);
    add_solver_options(solve_cmd, cfg);
    solve_cmd->add_option("--out", cfg.out, "output directory");

    auto* verify = app.add_subcommand("verify", "run a property suite");
    std::string suite;
    std::string verify_out;
    verify->add_option("suite", suite, "suite name")->required();
    verify->add_option("--seed", cfg.seed, "seed");
    verify->add_option("--out", verify_out, "directory for a JSON report");

    auto* exp = app.add_subcommand("export", "trajectory stream to plot-ready table");
    std::string traj_path;
    std::string format = "csv";
    std::string export_out;
    exp->add_option("trajectory", traj_path, "trajectory.jsonl")->required();
    exp->add_option("--format", format, "csv");
    exp->add_option("-o,--output", export_out, "output file (default stdout)");

    auto* sweep = app.add_subcommand("sweep", "flows over a grid of alpha and seeds");
    add_model_options(sweep, cfg);
    add_integrator_options(sweep, cfg);
    sweep->add_option("--out", cfg.out, "output directory");
    std::vector<double> alphas;
    std::vector<std::uint64_t> seeds;
    int workers = 0;
    sweep->add_option("--alphas", alphas, "alpha values")->delimiter(',')->required();
    sweep->add_option("--seeds", seeds, "seeds")->delimiter(',')->required();
    sweep->add_option("--workers", workers, "worker threads (default: all cores)");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_code::ok : exit_code::failure;
    }

    try {
        if (*validate) {
            return cmd_validate(cfg, check_branch, length_bound);
        }
        if (*curv) {
            return cmd_curvature(cfg);
        }
        if (*flow) {
            return cmd_flow(cfg, quiet);
        }
        if (*solve_cmd) {
            return cmd_solve(cfg);
        }
        if (*verify) {
            return cmd_verify(suite, cfg.seed, verify_out);
        }
        if (*exp) {
            return cmd_export(traj_path, format, export_out);
        }
        if (*sweep) {
            return cmd_sweep(cfg, alphas, seeds, workers);
        }
    }
    catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code::failure;
    }
    return exit_code::failure;
}
