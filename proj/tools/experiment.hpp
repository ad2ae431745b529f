#pragma once

// Experiment configuration shared by the command-line subcommands: where the
// surface comes from, which potential/flow kind, and how its parameters are
// resolved into library types.

#include <charconv>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "alphaflow/alphaflow.hpp"

namespace alphaflow::cli
{

/// Conflicting or incomplete command-line settings (exit 1)
class ConfigError : public Error
{
public:
    using Error::Error;
};

namespace exit_code
{
inline constexpr int ok = 0;
inline constexpr int failure = 1;  ///< I/O, schema, configuration
inline constexpr int invalid = 2;
inline constexpr int branch_violation = 3;
inline constexpr int degenerated = 4;  ///< also diverging
inline constexpr int max_time = 5;     ///< also max_iterations
inline constexpr int no_stationary_point = 6;
}  // namespace exit_code

struct ExperimentConfig {
    std::string fixture;
    std::string file;
    std::optional<double> weight;
    std::string geometry;
    std::string kind;
    double alpha{1.0};
    std::vector<std::string> branches;  ///< "i:order"
    std::string normalization;
    std::string rbar;
    std::optional<double> gamma;
    std::uint64_t seed{0};
    std::string init{"random"};  ///< random | uniform | metric file path

    IntegratorConfig integ;
    std::string method{"rk45_adaptive"};
    SolveConfig solver;

    std::string out{"alphaflow_out"};

    /// Everything that affects results; the output directory is left out
    [[nodiscard]] nlohmann::json to_json() const
    {
        nlohmann::json j;
        j["fixture"] = fixture;
        j["file"] = file;
        j["weight"] = weight ? nlohmann::json(*weight) : nlohmann::json();
        j["geometry"] = geometry;
        j["kind"] = kind;
        j["alpha"] = alpha;
        j["branches"] = branches;
        j["normalization"] = normalization;
        j["rbar"] = rbar;
        j["gamma"] = gamma ? nlohmann::json(*gamma) : nlohmann::json();
        j["seed"] = seed;
        j["init"] = init;
        j["integrator"] = {{"method", method},
                           {"step", integ.step},
                           {"abs_tol", integ.abs_tol},
                           {"rel_tol", integ.rel_tol},
                           {"max_step", integ.max_step},
                           {"max_time", integ.max_time},
                           {"max_steps", integ.max_steps},
                           {"convergence_tol", integ.convergence_tol},
                           {"min_angle", integ.min_angle},
                           {"u_cap", integ.u_cap},
                           {"record_every", integ.record_every},
                           {"track_potential", integ.track_potential}};
        j["solver"] = {{"tolerance", solver.tolerance}, {"max_iterations", solver.max_iterations}};
        return j;
    }
};

/// Everything resolved from an ExperimentConfig
struct Experiment {
    TriangulationDocument doc;
    PotentialKind kind{PotentialKind::main_E};
    Geometry geom{Geometry::euclidean};
    PotentialSpec spec;
    Eigen::VectorXd u0;
    Eigen::VectorXd gamma;
    std::string source;
};

namespace detail
{

inline double parse_double(const std::string& s, const std::string& what)
{
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || p != end) {
        throw ConfigError("malformed " + what + " '" + s + "'");
    }
    return v;
}

inline int parse_int(const std::string& s, const std::string& what)
{
    int v = 0;
    const auto* end = s.data() + s.size();
    const auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || p != end) {
        throw ConfigError("malformed " + what + " '" + s + "'");
    }
    return v;
}

inline bool starts_with(const std::string& s, const std::string& prefix)
{
    return s.rfind(prefix, 0) == 0;
}

}  // namespace detail

namespace detail
{

inline TriangulationDocument base_document(const ExperimentConfig& c)
{
    if (c.fixture.empty() == c.file.empty()) {
        throw ConfigError("give exactly one of --fixture and --file");
    }
    if (!c.fixture.empty()) {
        const double w = c.weight.value_or(0.0);
        auto wt = builtin(c.fixture, w);
        const int n = wt.vertex_count();
        return TriangulationDocument{std::move(wt), BranchAssignment::none(n), w};
    }
    if (c.weight) {
        throw ConfigError("--weight applies to fixtures only");
    }
    return load_document_file(c.file);
}

}  // namespace detail

/// Surface and branch orders from --fixture/--file and --branch
inline TriangulationDocument load_surface(const ExperimentConfig& c)
{
    auto doc = detail::base_document(c);
    for (const auto& b : c.branches) {
        const auto colon = b.find(':');
        if (colon == std::string::npos) {
            throw ConfigError("--branch expects i:order, got '" + b + "'");
        }
        const int v = detail::parse_int(b.substr(0, colon), "branch vertex");
        const int order = detail::parse_int(b.substr(colon + 1), "branch order");
        if (v < 0 || v >= doc.triangulation.vertex_count() || order < 0) {
            throw ConfigError("--branch " + b + " out of range");
        }
        doc.branch.orders[v] = order;
    }
    return doc;
}

/// Kind from --kind, else main kind of --geometry, else main_E
inline PotentialKind resolve_kind(const ExperimentConfig& c)
{
    if (!c.kind.empty()) {
        const auto k = parse_potential_kind(c.kind);
        if (!c.geometry.empty() && parse_geometry(c.geometry) != geometry_of(k)) {
            throw ConfigError("--geometry " + c.geometry + " conflicts with kind " + c.kind);
        }
        return k;
    }
    if (!c.geometry.empty() && parse_geometry(c.geometry) == Geometry::hyperbolic) {
        return PotentialKind::main_H;
    }
    return PotentialKind::main_E;
}

inline Eigen::VectorXd load_rbar_file(const std::string& path)
{
    const auto j = read_json_file(path);
    if (j.is_object() && j.contains("rbar")) {
        return vector_from_json(j.at("rbar"), "rbar");
    }
    return vector_from_json(j, "rbar");
}

/// Initial metric from --init
inline Eigen::VectorXd initial_u(const ExperimentConfig& c, Geometry g, int n)
{
    if (c.init == "random") {
        Rng rng(c.seed);
        return random_u(g, n, rng);
    }
    if (c.init == "uniform") {
        return Eigen::VectorXd::Constant(n, radius_to_u(g, 1.0));
    }
    const auto m = load_metric_file(c.init);
    if (m.geom != g || m.size() != n) {
        throw ConfigError("initial metric " + c.init + " does not match geometry/vertex count");
    }
    return to_u(m);
}

inline Experiment resolve(const ExperimentConfig& c)
{
    Experiment e{load_surface(c)};
    e.source = c.fixture.empty() ? c.file : c.fixture;
    const auto& wt = e.doc.triangulation;
    const int n = wt.vertex_count();
    e.kind = resolve_kind(c);
    e.geom = geometry_of(e.kind);

    e.spec.kind = e.kind;
    e.spec.alpha = c.alpha;
    e.spec.beta = e.doc.branch;
    if (uses_normalization(e.kind)) {
        if (!c.rbar.empty()) {
            throw ConfigError("--rbar does not apply to " + to_string(e.kind));
        }
        e.spec.normalization = c.normalization.empty() ? Normalization::default_for(e.geom)
                                                       : Normalization::parse(c.normalization);
    }
    else {
        if (!c.normalization.empty()) {
            throw ConfigError("--normalization does not apply to " + to_string(e.kind));
        }
        if (c.rbar.empty()) {
            throw ConfigError(to_string(e.kind) + " needs --rbar");
        }
        if (detail::starts_with(c.rbar, "const=")) {
            e.spec.rbar = Eigen::VectorXd::Constant(n, detail::parse_double(c.rbar.substr(6), "rbar"));
        }
        else if (detail::starts_with(c.rbar, "from-metric=")) {
            const auto m = load_metric_file(c.rbar.substr(12));
            if (m.geom != e.geom || m.size() != n) {
                throw ConfigError("metric for --rbar does not match geometry/vertex count");
            }
            e.spec.rbar = rbar_from_metric(e.kind, wt, m, c.alpha, e.doc.branch);
        }
        else {
            e.spec.rbar = load_rbar_file(c.rbar);
        }
        if (e.spec.rbar.size() != n) {
            throw ConfigError("--rbar has " + std::to_string(e.spec.rbar.size()) + " values for " +
                              std::to_string(n) + " vertices");
        }
    }
    if (c.gamma) {
        if (!is_area_kind(e.kind)) {
            throw ConfigError("--gamma applies to area kinds only");
        }
        e.gamma = Eigen::VectorXd::Constant(n, *c.gamma);
    }
    e.u0 = initial_u(c, e.geom, n);
    return e;
}

/// Fields every summary carries
inline ojson summary_header(const std::string& command, const ExperimentConfig& c,
                            const Experiment& e)
{
    ojson s;
    s["command"] = command;
    s["config_hash"] = config_hash(c.to_json());
    s["config"] = c.to_json();
    s["source"] = e.source;
    s["chi"] = euler_characteristic(e.doc.triangulation);
    s["vertices"] = e.doc.triangulation.vertex_count();
    s["kind"] = to_string(e.kind);
    s["geometry"] = to_string(e.geom);
    s["alpha"] = e.spec.alpha;
    s["total_branch_order"] = e.doc.branch.total_order();
    s["normalization"] = uses_normalization(e.kind) ? ojson(e.spec.normalization.str()) : ojson();
    s["seed"] = c.seed;
    return s;
}

}  // namespace alphaflow::cli
