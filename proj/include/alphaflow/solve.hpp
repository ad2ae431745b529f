#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "alphaflow/errors.hpp"
#include "alphaflow/linalg.hpp"
#include "alphaflow/parallel.hpp"
#include "alphaflow/potential.hpp"
#include "alphaflow/random.hpp"

namespace alphaflow
{

/** @brief Newton solver settings */
struct SolveConfig {
    double tolerance{1e-10};  ///< on ||omega||_inf
    int max_iterations{200};
    double armijo{1e-4};  ///< sufficient-decrease fraction, in (0, 1/2)
    double backtrack{0.5};
    int max_backtracks{60};
    double boundary_fraction{0.9};  ///< hyperbolic steps stop this fraction short of u = 0
    Eigen::VectorXd u0;             ///< empty: u at r = 1

    void check() const
    {
        if (!(tolerance > 0.0)) {
            throw DomainError("solver tolerance must be positive");
        }
        if (!(armijo > 0.0 && armijo < 0.5)) {
            throw DomainError("Armijo fraction must lie in (0, 1/2)");
        }
        if (!(backtrack > 0.0 && backtrack < 1.0) || max_iterations < 0 || max_backtracks < 1) {
            throw DomainError("invalid line-search settings");
        }
        if (!(boundary_fraction > 0.0 && boundary_fraction < 1.0)) {
            throw DomainError("boundary fraction must lie in (0, 1)");
        }
    }
};

enum class SolveStatus { found, no_stationary_point, max_iterations };

inline std::string to_string(SolveStatus s)
{
    switch (s) {
        case SolveStatus::found:
            return "found";
        case SolveStatus::no_stationary_point:
            return "no_stationary_point";
        case SolveStatus::max_iterations:
            return "max_iterations";
    }
    return "?";
}

/**
 * @brief Solver outcome
 *
 * found implies residual < tolerance and certificate > 0. The certificate is
 * the smallest eigenvalue of the Hessian at the returned point, restricted to
 * the mean-zero hyperplane for main_E under literal/branched normalization.
 */
struct StationaryResult {
    SolveStatus status{SolveStatus::max_iterations};
    Geometry geom{Geometry::euclidean};
    Eigen::VectorXd u;
    Eigen::VectorXd r;
    double residual{std::numeric_limits<double>::quiet_NaN()};
    double certificate{std::numeric_limits<double>::quiet_NaN()};
    double obstruction{std::numeric_limits<double>::quiet_NaN()};  ///< lower bound on sum(omega)
    double gradient_sum{std::numeric_limits<double>::quiet_NaN()};
    int iterations{0};
    int gradient_steps{0};  ///< iterations that fell back to -omega
    std::string message;
    std::vector<std::string> warnings;
};

namespace detail
{

inline bool solves_in_mean_zero(const PotentialSpec& spec)
{
    return spec.kind == PotentialKind::main_E && !spec.normalization.is_explicit();
}

inline Eigen::VectorXd initial_point(const PotentialSpec& spec, const WeightedTriangulation& wt,
                                     const SolveConfig& cfg)
{
    Eigen::VectorXd u = cfg.u0.size() > 0
                          ? cfg.u0
                          : Eigen::VectorXd::Constant(wt.vertex_count(),
                                                      radius_to_u(spec.geometry(), 1.0));
    if (u.size() != wt.vertex_count() || !in_domain(spec.geometry(), u)) {
        throw DomainError("initial metric outside the domain of " + to_string(spec.kind));
    }
    if (solves_in_mean_zero(spec)) {
        u = project_mean_zero(u);
    }
    return u;
}

inline double certificate(const PotentialSpec& spec, const WeightedTriangulation& wt,
                          const Eigen::VectorXd& u)
{
    if (solves_in_mean_zero(spec)) {
        return min_eigenvalue(restricted_hessian_U(spec, wt, u));
    }
    return min_eigenvalue(potential_hessian(spec, wt, u));
}

/// Largest t <= 1 keeping u + t d inside the hyperbolic domain with margin
inline double step_limit(Geometry g, const Eigen::VectorXd& u, const Eigen::VectorXd& d,
                         double fraction)
{
    if (g == Geometry::euclidean) {
        return 1.0;
    }
    double t = 1.0;
    for (int i = 0; i < u.size(); ++i) {
        if (d[i] > 0.0) {
            t = std::min(t, fraction * (-u[i]) / d[i]);
        }
    }
    return t;
}

/// Armijo backtracking on phi = ||omega||^2 along d with directional slope `slope` (< 0)
inline bool line_search(const PotentialSpec& spec, const WeightedTriangulation& wt,
                        const SolveConfig& cfg, const Eigen::VectorXd& u, const Eigen::VectorXd& d,
                        double phi, double slope, Eigen::VectorXd& u_out, FormEvaluation& ev_out)
{
    double t = step_limit(spec.geometry(), u, d, cfg.boundary_fraction);
    for (int k = 0; k < cfg.max_backtracks; ++k, t *= cfg.backtrack) {
        Eigen::VectorXd trial = u + t * d;
        if (solves_in_mean_zero(spec)) {
            trial = project_mean_zero(trial);
        }
        try {
            FormEvaluation ev = evaluate_form(spec, wt, trial);
            if (ev.omega.squaredNorm() <= phi + cfg.armijo * t * slope) {
                u_out = std::move(trial);
                ev_out = std::move(ev);
                return true;
            }
        }
        catch (const Error&) {
            // outside the domain or degenerate: shorten
        }
    }
    return false;
}

inline StationaryResult newton(const PotentialSpec& spec, const WeightedTriangulation& wt,
                               const SolveConfig& cfg)
{
    cfg.check();
    StationaryResult res;
    res.geom = spec.geometry();
    const int n = wt.vertex_count();
    const bool in_U = solves_in_mean_zero(spec);
    Eigen::VectorXd u = initial_point(spec, wt, cfg);
    FormEvaluation ev = evaluate_form(spec, wt, u);

    auto finish = [&](SolveStatus st) {
        res.u = u;
        res.r = from_u(spec.geometry(), u).r;
        res.residual = ev.omega.cwiseAbs().maxCoeff();
        res.gradient_sum = ev.omega.sum();
        try {
            res.certificate = certificate(spec, wt, u);
        }
        catch (const Error&) {
            res.certificate = std::numeric_limits<double>::quiet_NaN();
        }
        res.status = st;
        if (st == SolveStatus::found && !(res.certificate > 0.0)) {
            res.status = SolveStatus::max_iterations;
            res.message = "stationary point without a positive-definite Hessian";
        }
        return res;
    };

    for (int it = 0; it <= cfg.max_iterations; ++it) {
        res.iterations = it;
        if (ev.omega.cwiseAbs().maxCoeff() < cfg.tolerance) {
            return finish(SolveStatus::found);
        }
        if (it == cfg.max_iterations) {
            break;
        }
        const double phi = ev.omega.squaredNorm();
        Eigen::MatrixXd H = potential_hessian(spec, wt, u);

        Eigen::VectorXd d;
        if (in_U) {
            const Eigen::MatrixXd A = H + Eigen::MatrixXd::Constant(n, n, 1.0 / n);
            d = project_mean_zero(A.partialPivLu().solve(-ev.omega));
        }
        else {
            d = H.partialPivLu().solve(-ev.omega);
        }

        Eigen::VectorXd u_next;
        FormEvaluation ev_next;
        bool ok = d.allFinite() &&
                  line_search(spec, wt, cfg, u, d, phi, -2.0 * phi, u_next, ev_next);
        if (!ok) {
            // gradient fallback: d = -omega descends phi when H is positive definite
            Eigen::VectorXd g = -ev.omega;
            if (in_U) {
                g = project_mean_zero(g);
            }
            const double slope = -2.0 * ev.omega.dot(H * ev.omega);
            ok = slope < 0.0 && line_search(spec, wt, cfg, u, g, phi, slope, u_next, ev_next);
            if (!ok) {
                res.message = "line search failed at iteration " + std::to_string(it);
                return finish(SolveStatus::max_iterations);
            }
            ++res.gradient_steps;
        }
        u = std::move(u_next);
        ev = std::move(ev_next);
    }
    res.message = "iteration limit reached";
    return finish(SolveStatus::max_iterations);
}

}  // namespace detail

/**
 * @brief Constant branched alpha-metric: a zero of the main one-form
 *
 * Euclidean main under the literal normalization first checks the exact
 * identity sum(omega) = 2 pi sum(beta); when it exceeds the tolerance no
 * stationary point exists and the obstruction is returned without iterating.
 * Other failures come back as max_iterations with the last iterate and its
 * gradient sum.
 */
inline StationaryResult stationary_metric(const PotentialSpec& spec,
                                          const WeightedTriangulation& wt,
                                          const SolveConfig& cfg = {})
{
    if (spec.kind != PotentialKind::main_E && spec.kind != PotentialKind::main_H) {
        throw DomainError("stationary_metric solves main_E or main_H, got " + to_string(spec.kind));
    }
    detail::require_alpha(spec.alpha);
    if (spec.kind == PotentialKind::main_H && euler_characteristic(wt) > -1) {
        throw DomainError("main_H needs Euler characteristic <= -1");
    }
    if (spec.kind == PotentialKind::main_E &&
        spec.normalization.kind == Normalization::Kind::literal) {
        const auto beta = effective_beta(spec, wt);
        const double sum = 2.0 * std::numbers::pi * beta.total_order();
        if (std::abs(sum) > cfg.tolerance) {
            StationaryResult res;
            res.status = SolveStatus::no_stationary_point;
            res.geom = Geometry::euclidean;
            res.obstruction = sum;
            res.gradient_sum = sum;
            res.u = detail::initial_point(spec, wt, cfg);
            res.r = from_u(Geometry::euclidean, res.u).r;
            res.residual = evaluate_form(spec, wt, res.u).omega.cwiseAbs().maxCoeff();
            res.message = "gradient sum is identically 2 pi sum(beta) under the literal "
                          "normalization";
            return res;
        }
    }
    return detail::newton(spec, wt, cfg);
}

/**
 * @brief Metric with prescribed alpha-curvature (or area curvature) rbar
 *
 * Found solutions satisfy alpha_curvature (area_curvature) = rbar up to the
 * tolerance. Positive rbar entries void the uniqueness guarantee and add a
 * warning.
 */
inline StationaryResult solve_prescribed(const PotentialSpec& spec,
                                         const WeightedTriangulation& wt,
                                         const SolveConfig& cfg = {})
{
    if (!uses_rbar(spec.kind)) {
        throw DomainError("solve_prescribed takes a prescribed or area kind, got " +
                          to_string(spec.kind));
    }
    detail::require_alpha(spec.alpha);
    if (spec.rbar.size() != wt.vertex_count()) {
        throw DomainError("prescribed curvature needs one value per vertex");
    }
    auto res = detail::newton(spec, wt, cfg);
    if (spec.rbar.maxCoeff() > 0.0) {
        res.warnings.push_back("prescribed curvature has positive entries; uniqueness is not "
                               "guaranteed");
    }
    return res;
}

/** @brief Dispatch on the kind */
inline StationaryResult solve(const PotentialSpec& spec, const WeightedTriangulation& wt,
                              const SolveConfig& cfg = {})
{
    return uses_rbar(spec.kind) ? solve_prescribed(spec, wt, cfg) : stationary_metric(spec, wt, cfg);
}

/** @brief Potential along rays u* + t d */
struct PropernessTable {
    std::vector<double> radii;
    double center_value{0.0};
    std::vector<std::vector<double>> values;  ///< [direction][radius], NaN where degenerate
    std::vector<double> row_min;              ///< min over directions per radius
    std::vector<std::string> failures;        ///< "direction k, t = ...: reason"

    /// min over directions strictly increasing in t
    [[nodiscard]] bool strictly_increasing() const
    {
        for (std::size_t k = 1; k < row_min.size(); ++k) {
            if (!(row_min[k] > row_min[k - 1])) {
                return false;
            }
        }
        return !row_min.empty();
    }
};

/**
 * @brief Evaluate the potential at u* + t d for random unit directions d
 *
 * Directions are Gaussian, projected to the mean-zero hyperplane for main_E,
 * and normalized. Rays leaving the domain are reported, not fatal.
 */
inline PropernessTable properness_probe(const PotentialSpec& spec, const WeightedTriangulation& wt,
                                        const Eigen::VectorXd& u_star, int directions,
                                        const std::vector<double>& radii, std::uint64_t seed,
                                        const QuadratureConfig& quad = {}, int workers = 0)
{
    if (!is_closed(spec.kind)) {
        throw DomainError("properness probe needs a closed one-form");
    }
    const int n = wt.vertex_count();
    Rng rng(seed);
    std::normal_distribution<double> normal;
    std::vector<Eigen::VectorXd> dirs;
    for (int k = 0; k < directions; ++k) {
        Eigen::VectorXd d(n);
        for (int i = 0; i < n; ++i) {
            d[i] = normal(rng);
        }
        if (detail::solves_in_mean_zero(spec)) {
            d = project_mean_zero(d);
        }
        dirs.push_back(d.normalized());
    }

    PropernessTable table;
    table.radii = radii;
    table.center_value = potential(spec, wt, u_star, quad);
    table.values.assign(dirs.size(), std::vector<double>(radii.size()));
    std::vector<std::vector<std::string>> notes(dirs.size());
    parallel_for(
        dirs.size(),
        [&](std::size_t k) {
            for (std::size_t j = 0; j < radii.size(); ++j) {
                try {
                    table.values[k][j] = potential(spec, wt, u_star + radii[j] * dirs[k], quad);
                }
                catch (const Error& e) {
                    table.values[k][j] = std::numeric_limits<double>::quiet_NaN();
                    notes[k].push_back("direction " + std::to_string(k) +
                                       ", t = " + std::to_string(radii[j]) + ": " + e.what());
                }
            }
        },
        workers);
    for (auto& v : notes) {
        table.failures.insert(table.failures.end(), v.begin(), v.end());
    }
    for (std::size_t j = 0; j < radii.size(); ++j) {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& row : table.values) {
            if (!std::isnan(row[j])) {
                m = std::min(m, row[j]);
            }
        }
        table.row_min.push_back(m);
    }
    return table;
}

}  // namespace alphaflow
