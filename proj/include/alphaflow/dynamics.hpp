#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <boost/numeric/odeint/stepper/controlled_runge_kutta.hpp>
#include <boost/numeric/odeint/stepper/generation.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta4.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta_dopri5.hpp>

#include "alphaflow/errors.hpp"
#include "alphaflow/packing.hpp"
#include "alphaflow/potential.hpp"
#include "alphaflow/surface.hpp"

namespace alphaflow
{

/**
 * @brief One flow run: the potential parameters, optional per-vertex speed
 * gamma for area kinds, and the initial point in u-coordinates
 *
 * The flow kind is spec.kind. sinh_variant_H is accepted as an experimental
 * kind without a convergence contract.
 */
struct FlowSpec {
    PotentialSpec potential;
    Eigen::VectorXd gamma;  ///< area kinds only; empty means 1
    Eigen::VectorXd u0;

    [[nodiscard]] PotentialKind kind() const { return potential.kind; }
    [[nodiscard]] Geometry geometry() const { return potential.geometry(); }
};

/**
 * @brief Reject inconsistent flow settings
 * @throws DomainError naming the problem
 */
inline void validate_flow(const FlowSpec& spec, const WeightedTriangulation& wt)
{
    detail::require_alpha(spec.potential.alpha);
    const int n = wt.vertex_count();
    if (spec.u0.size() != n) {
        throw DomainError("initial metric has " + std::to_string(spec.u0.size()) +
                          " entries for " + std::to_string(n) + " vertices");
    }
    if (!in_domain(spec.geometry(), spec.u0)) {
        throw DomainError("initial metric outside the domain of " + to_string(spec.kind()));
    }
    if ((spec.kind() == PotentialKind::main_H || spec.kind() == PotentialKind::sinh_variant_H) &&
        euler_characteristic(wt) > -1) {
        throw DomainError(to_string(spec.kind()) + " needs Euler characteristic <= -1, got " +
                          std::to_string(euler_characteristic(wt)));
    }
    if (uses_rbar(spec.kind()) && spec.potential.rbar.size() != n) {
        throw DomainError(to_string(spec.kind()) + " needs a prescribed curvature per vertex");
    }
    if (spec.gamma.size() > 0) {
        if (!is_area_kind(spec.kind())) {
            throw DomainError("gamma applies to area kinds only");
        }
        if (spec.gamma.size() != n || !(spec.gamma.minCoeff() > 0.0)) {
            throw DomainError("gamma must hold one positive value per vertex");
        }
    }
    (void)effective_beta(spec.potential, wt);
}

/** @brief Non-fatal remarks about a flow spec (prescribed curvature with positive entries) */
inline std::vector<std::string> flow_warnings(const FlowSpec& spec)
{
    std::vector<std::string> out;
    if (uses_rbar(spec.kind()) && spec.potential.rbar.size() > 0 &&
        spec.potential.rbar.maxCoeff() > 0.0) {
        out.push_back("prescribed curvature has positive entries; convergence and uniqueness "
                      "are not guaranteed");
    }
    return out;
}

namespace detail
{

/// du/dt from an evaluated form: -omega, or -gamma omega / A for area kinds
inline Eigen::VectorXd field_from_form(const FlowSpec& spec, const FormEvaluation& ev)
{
    if (!is_area_kind(spec.kind())) {
        return -ev.omega;
    }
    Eigen::VectorXd v = -(ev.omega.array() / ev.weight.array()).matrix();
    if (spec.gamma.size() > 0) {
        v = (v.array() * spec.gamma.array()).matrix();
    }
    return v;
}

}  // namespace detail

/**
 * @brief Right-hand side du/dt
 *
 * main and prescribed kinds: -omega; area kinds: gamma (rbar - R_{H,A}).
 */
inline Eigen::VectorXd flow_field(const FlowSpec& spec, const WeightedTriangulation& wt,
                                  const Eigen::VectorXd& u)
{
    return detail::field_from_form(spec, evaluate_form(spec.potential, wt, u));
}

enum class IntegrationMethod { rk45_adaptive, rk4_fixed };

inline std::string to_string(IntegrationMethod m)
{
    return m == IntegrationMethod::rk45_adaptive ? "rk45_adaptive" : "rk4_fixed";
}

inline IntegrationMethod parse_integration_method(std::string_view s)
{
    if (s == "rk45_adaptive" || s == "rk45") {
        return IntegrationMethod::rk45_adaptive;
    }
    if (s == "rk4_fixed" || s == "rk4") {
        return IntegrationMethod::rk4_fixed;
    }
    throw DomainError("unknown integration method '" + std::string(s) + "'");
}

/** @brief Integrator settings; accepted steps become trajectory records */
struct IntegratorConfig {
    IntegrationMethod method{IntegrationMethod::rk45_adaptive};
    double step{0.01};  ///< rk4 step; initial step for rk45
    double abs_tol{1e-9};
    double rel_tol{1e-9};
    double max_step{0.1};  ///< upper bound on any single step; also sets record density
    /// adaptive steps are also capped at stability_factor / (Gershgorin bound of the field
    /// Jacobian); near a fixed point this keeps stiff modes damped instead of parked at the
    /// tolerance level. 0 disables the cap.
    double stability_factor{2.0};
    double min_step{1e-14};
    double max_time{1e4};
    long max_steps{1'000'000};
    double convergence_tol{1e-10};  ///< on ||omega||_inf
    double min_angle{1e-9};         ///< degeneration threshold (radians)
    double u_cap{50.0};             ///< |u_i| above this counts as diverging
    bool track_potential{true};
    long record_every{1};  ///< keep every k-th accepted step (terminal step always kept)
    QuadratureConfig quad{1, 16, 1e-10, 1 << 14};

    void check() const
    {
        if (!(step > 0.0 && abs_tol > 0.0 && rel_tol > 0.0 && max_step > 0.0 && min_step > 0.0 &&
              max_time >= 0.0 && max_steps > 0 && convergence_tol > 0.0 && min_angle >= 0.0 &&
              u_cap > 0.0 && stability_factor >= 0.0 && record_every > 0)) {
            throw DomainError("integrator settings must be positive");
        }
    }
};

enum class FlowStatus { converged, max_time, degenerated, diverging };

inline std::string to_string(FlowStatus s)
{
    switch (s) {
        case FlowStatus::converged:
            return "converged";
        case FlowStatus::max_time:
            return "max_time";
        case FlowStatus::degenerated:
            return "degenerated";
        case FlowStatus::diverging:
            return "diverging";
    }
    return "?";
}

/** @brief State and derived quantities at one time */
struct FlowRecord {
    double t{0.0};
    Eigen::VectorXd u;
    Eigen::VectorXd r;
    Eigen::VectorXd K;
    Eigen::VectorXd B;      ///< (K + 2 pi beta) / exp(alpha u)
    Eigen::VectorXd omega;  ///< one-form value
    Eigen::VectorXd field;  ///< du/dt
    double s_alpha{std::numeric_limits<double>::quiet_NaN()};
    double omega_inf{0.0};
    double omega_2{0.0};
    double omega_sum{0.0};  ///< sum_i omega_i
    double potential{std::numeric_limits<double>::quiet_NaN()};
    double total_area{0.0};
    double min_angle{0.0};
    double G_max{0.0};  ///< G_v (euclidean) or G_p (hyperbolic, clamped at 0)
    double G_min{0.0};  ///< G_w (euclidean) or G_q (hyperbolic, clamped at 0)
};

/** @brief Output of one integration */
struct Trajectory {
    std::vector<FlowRecord> records;
    FlowStatus status{FlowStatus::max_time};
    std::string message;
    long steps{0};
    long rejected_steps{0};
    Geometry geom{Geometry::euclidean};

    [[nodiscard]] const FlowRecord& final_record() const { return records.back(); }
};

namespace detail
{

inline FlowRecord make_record(const FlowSpec& spec, const WeightedTriangulation& wt, double t,
                              const Eigen::VectorXd& u, const FormEvaluation& ev)
{
    FlowRecord rec;
    rec.t = t;
    rec.u = u;
    rec.r = from_u(spec.geometry(), u).r;
    rec.K = ev.K;
    const auto beta = effective_beta(spec.potential, wt);
    rec.B = ((ev.K + branch_term(beta)).array() /
             alpha_weights(u, spec.potential.alpha).array())
                .matrix();
    rec.omega = ev.omega;
    rec.field = field_from_form(spec, ev);
    rec.s_alpha = ev.s;
    rec.omega_inf = ev.omega.cwiseAbs().maxCoeff();
    rec.omega_2 = ev.omega.norm();
    rec.omega_sum = ev.omega.sum();
    rec.total_area = ev.total_area;
    rec.min_angle = ev.min_angle;
    const double hi = ev.omega.maxCoeff();
    const double lo = ev.omega.minCoeff();
    if (spec.geometry() == Geometry::euclidean) {
        rec.G_max = hi;
        rec.G_min = lo;
    }
    else {
        rec.G_max = std::max(hi, 0.0);
        rec.G_min = std::min(lo, 0.0);
    }
    return rec;
}

using State = std::vector<double>;

inline Eigen::VectorXd to_eigen(const State& x)
{
    return Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
}

inline State to_state(const Eigen::VectorXd& v)
{
    return State(v.data(), v.data() + v.size());
}

/// Gershgorin bound on the spectral radius of d(du/dt)/du
inline double field_jacobian_bound(const FlowSpec& spec, const WeightedTriangulation& wt,
                                   const Eigen::VectorXd& u, const FormEvaluation& ev)
{
    Eigen::MatrixXd H = potential_hessian(spec.potential, wt, u);
    if (is_area_kind(spec.kind())) {
        // d/du of omega / A: the omega dA/du part vanishes at the fixed point; keep the rest
        Eigen::VectorXd scale = ev.weight.cwiseInverse();
        if (spec.gamma.size() > 0) {
            scale = (scale.array() * spec.gamma.array()).matrix();
        }
        H = scale.asDiagonal() * H;
    }
    return H.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace detail

/**
 * @brief Integrate du/dt = flow_field in u-coordinates
 *
 * Stops on ||omega||_inf < convergence_tol (converged), a minimum angle
 * below the threshold or a step-size underflow (degenerated), |u_i| above
 * u_cap (diverging), or the time/step budget (max_time). Steps whose stages
 * leave the domain or hit a degenerate triangle are retried at half size.
 * The potential column is F(u0) along the straight path from the base point,
 * then accumulated segment by segment along the trajectory.
 */
inline Trajectory integrate(const FlowSpec& spec, const WeightedTriangulation& wt,
                            const IntegratorConfig& cfg = {})
{
    namespace odeint = boost::numeric::odeint;
    validate_flow(spec, wt);
    cfg.check();

    Trajectory traj;
    traj.geom = spec.geometry();
    const Geometry geom = spec.geometry();

    Eigen::VectorXd u = spec.u0;
    double t = 0.0;
    FormEvaluation ev = evaluate_form(spec.potential, wt, u);
    auto rec = detail::make_record(spec, wt, t, u, ev);
    if (cfg.track_potential) {
        rec.potential = potential(spec.potential, wt, u, cfg.quad);
    }
    double running_potential = rec.potential;
    traj.records.push_back(rec);
    if (rec.omega_inf < cfg.convergence_tol) {
        traj.status = FlowStatus::converged;
        return traj;
    }

    auto sys = [&](const detail::State& x, detail::State& dxdt, double /*t*/) {
        const Eigen::VectorXd v = flow_field(spec, wt, detail::to_eigen(x));
        dxdt.assign(v.data(), v.data() + v.size());
    };

    using Dopri = odeint::runge_kutta_dopri5<detail::State>;
    auto controlled = odeint::make_controlled(cfg.abs_tol, cfg.rel_tol, Dopri());
    odeint::runge_kutta4<detail::State> rk4;

    double dt = std::min(cfg.step, cfg.max_step);
    auto stability_bound = [&](const Eigen::VectorXd& uu, const FormEvaluation& e) {
        if (cfg.method != IntegrationMethod::rk45_adaptive || cfg.stability_factor <= 0.0) {
            return std::numeric_limits<double>::infinity();
        }
        const double rho = detail::field_jacobian_bound(spec, wt, uu, e);
        return rho > 0.0 ? cfg.stability_factor / rho : std::numeric_limits<double>::infinity();
    };
    double stability_cap = stability_bound(u, ev);
    detail::State x = detail::to_state(u);
    detail::State dxdt = detail::to_state(rec.field);

    while (true) {
        if (t >= cfg.max_time) {
            traj.status = FlowStatus::max_time;
            traj.message = "reached max_time";
            return traj;
        }
        if (traj.steps >= cfg.max_steps) {
            traj.status = FlowStatus::max_time;
            traj.message = "reached max_steps";
            return traj;
        }
        const double h_nominal = cfg.method == IntegrationMethod::rk4_fixed ? cfg.step : dt;
        double h = std::min({h_nominal, cfg.max_step, cfg.max_time - t});
        if (cfg.method == IntegrationMethod::rk45_adaptive && cfg.stability_factor > 0.0) {
            h = std::min(h, stability_cap);
        }
        if (h < cfg.min_step) {
            traj.status = FlowStatus::degenerated;
            traj.message = "step size underflow at t = " + std::to_string(t);
            return traj;
        }

        detail::State out(x.size());
        detail::State dxdt_out(x.size());
        double t_new = t;
        bool accepted = false;
        try {
            if (cfg.method == IntegrationMethod::rk4_fixed) {
                out = x;
                rk4.do_step(sys, out, t, h);
                t_new = t + h;
                accepted = true;
            }
            else {
                double t_try = t;
                double h_try = h;
                const auto res = controlled.try_step(sys, x, dxdt, t_try, out, dxdt_out, h_try);
                if (res == odeint::success) {
                    accepted = true;
                    t_new = t_try;
                }
                dt = h_try;
            }
        }
        catch (const Error&) {
            // a stage left the domain or met a degenerate triangle
            dt = 0.5 * h;
            ++traj.rejected_steps;
            if (cfg.method == IntegrationMethod::rk4_fixed) {
                // retry this step at half size, then resume the nominal step
                double hh = 0.5 * h;
                bool ok = false;
                while (hh >= cfg.min_step && !ok) {
                    try {
                        out = x;
                        rk4.do_step(sys, out, t, hh);
                        t_new = t + hh;
                        ok = in_domain(geom, detail::to_eigen(out));
                    }
                    catch (const Error&) {
                        ok = false;
                    }
                    if (!ok) {
                        hh *= 0.5;
                        ++traj.rejected_steps;
                    }
                }
                if (!ok) {
                    traj.status = FlowStatus::degenerated;
                    traj.message = "step size underflow at t = " + std::to_string(t);
                    return traj;
                }
                accepted = true;
            }
            else {
                continue;
            }
        }
        if (!accepted) {
            ++traj.rejected_steps;
            continue;
        }

        const Eigen::VectorXd u_new = detail::to_eigen(out);
        FormEvaluation ev_new;
        try {
            if (!in_domain(geom, u_new)) {
                throw DomainError("step left the domain");
            }
            ev_new = evaluate_form(spec.potential, wt, u_new);
        }
        catch (const Error&) {
            dt = 0.5 * (t_new - t);
            ++traj.rejected_steps;
            continue;
        }

        ++traj.steps;
        auto next = detail::make_record(spec, wt, t_new, u_new, ev_new);
        if (cfg.track_potential) {
            try {
                running_potential +=
                    potential_along_path(spec.potential, wt, {u, u_new}, cfg.quad);
            }
            catch (const Error&) {
                running_potential = std::numeric_limits<double>::quiet_NaN();
            }
            next.potential = running_potential;
        }
        const bool terminal = next.min_angle < cfg.min_angle ||
                              u_new.cwiseAbs().maxCoeff() > cfg.u_cap ||
                              next.omega_inf < cfg.convergence_tol || t_new >= cfg.max_time ||
                              traj.steps >= cfg.max_steps;
        if (terminal || traj.steps % cfg.record_every == 0) {
            traj.records.push_back(next);
        }
        u = u_new;
        t = t_new;
        x = out;
        dxdt = detail::to_state(next.field);
        stability_cap = stability_bound(u, ev_new);

        if (next.min_angle < cfg.min_angle) {
            traj.status = FlowStatus::degenerated;
            traj.message = "minimum angle " + std::to_string(next.min_angle) + " at t = " +
                           std::to_string(t);
            return traj;
        }
        if (u.cwiseAbs().maxCoeff() > cfg.u_cap) {
            traj.status = FlowStatus::diverging;
            traj.message = "|u| exceeded " + std::to_string(cfg.u_cap) + " at t = " +
                           std::to_string(t);
            return traj;
        }
        if (next.omega_inf < cfg.convergence_tol) {
            traj.status = FlowStatus::converged;
            return traj;
        }
    }
}

/** @brief Least-squares decay fit of ln ||omega||_2 over the trailing half */
struct RateEstimate {
    double lambda{0.0};
    double r_squared{0.0};
    int records_used{0};
};

/**
 * @brief Fit ln ||omega(t)||_2 = a + lambda t on records with t >= t_final / 2
 * @throws ConvergenceError "insufficient decay" with fewer than 20 usable records
 */
inline RateEstimate estimate_rate(const Trajectory& traj, int min_records = 20)
{
    if (traj.records.empty()) {
        throw ConvergenceError("insufficient decay: empty trajectory");
    }
    const double t_end = traj.records.back().t;
    std::vector<double> ts, ys;
    for (const auto& r : traj.records) {
        if (r.t >= 0.5 * t_end && r.omega_2 > 0.0 && t_end > 0.0) {
            ts.push_back(r.t);
            ys.push_back(std::log(r.omega_2));
        }
    }
    if (static_cast<int>(ts.size()) < min_records) {
        throw ConvergenceError("insufficient decay: " + std::to_string(ts.size()) +
                               " tail records, need " + std::to_string(min_records));
    }
    const auto n = static_cast<double>(ts.size());
    double mt = 0.0, my = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        mt += ts[k];
        my += ys[k];
    }
    mt /= n;
    my /= n;
    double stt = 0.0, sty = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        stt += (ts[k] - mt) * (ts[k] - mt);
        sty += (ts[k] - mt) * (ys[k] - my);
        syy += (ys[k] - my) * (ys[k] - my);
    }
    if (!(stt > 0.0)) {
        throw ConvergenceError("insufficient decay: tail spans no time");
    }
    RateEstimate est;
    est.lambda = sty / stt;
    est.r_squared = syy > 0.0 ? (sty * sty) / (stt * syy) : 1.0;
    est.records_used = static_cast<int>(ts.size());
    return est;
}

/** @brief Envelope constants of the long-time bound, per vertex */
struct Envelope {
    Eigen::VectorXd a1;
    Eigen::VectorXd a2;
};

/**
 * @brief a1 = (2 - d) pi + 2 pi beta_i - |c|, a2 = 2 pi + 2 pi beta_i + |c|
 *
 * d is the maximum degree and c the numerator of the normalization
 * (2 pi chi literal, 2 pi (chi + sum beta) branched). Explicit
 * normalizations have no such bound.
 */
inline Envelope envelope_constants(const WeightedTriangulation& wt, const BranchAssignment& beta,
                                   const Normalization& norm)
{
    const double c = std::abs(norm.numerator(euler_characteristic(wt), beta.total_order()));
    const double d = wt.max_degree();
    Envelope env;
    env.a1.resize(wt.vertex_count());
    env.a2.resize(wt.vertex_count());
    for (int i = 0; i < wt.vertex_count(); ++i) {
        env.a1[i] = (2.0 - d) * std::numbers::pi + 2.0 * std::numbers::pi * beta[i] - c;
        env.a2[i] = 2.0 * std::numbers::pi + 2.0 * std::numbers::pi * beta[i] + c;
    }
    return env;
}

/** @brief Per-record diagnostic values */
struct DiagnosticSample {
    double t{0.0};
    double G_max{0.0};
    double G_min{0.0};
    double curvature_identity_residual{0.0};  ///< |chain-rule dK/dt - coupling form|_inf
    double omega_identity_residual{std::numeric_limits<double>::quiet_NaN()};
    double envelope_margin{std::numeric_limits<double>::quiet_NaN()};
};

struct DiagnosticsReport {
    std::vector<DiagnosticSample> samples;
    double max_curvature_identity_residual{0.0};
    double max_omega_identity_residual{std::numeric_limits<double>::quiet_NaN()};
    bool envelope_checked{false};
    double min_envelope_margin{std::numeric_limits<double>::quiet_NaN()};
    bool G_max_nonincreasing{true};  ///< observed, not asserted
    bool G_min_nondecreasing{true};
    bool G_ordered{true};  ///< G_min <= G_max (and G_q <= 0 <= G_p)
};

/**
 * @brief Curvature-evolution coupling form with v = -du/dt:
 * sum_j C_ij (v_j - v_i) - S_i v_i
 */
inline Eigen::VectorXd coupling_form(const CurvatureJacobian& cj, const Eigen::VectorXd& v)
{
    const int n = static_cast<int>(v.size());
    Eigen::VectorXd out(n);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j != i && cj.C(i, j) != 0.0) {
                acc += cj.C(i, j) * (v[j] - v[i]);
            }
        }
        out[i] = acc - cj.S[i] * v[i];
    }
    return out;
}

/**
 * @brief Evolution of omega for main kinds written through the couplings:
 * coupling_form(omega) + alpha s^2 w_i / c sum_l (omega_i - omega_l) w_l,
 * or + alpha s w_i omega_i for an explicit normalization
 */
inline Eigen::VectorXd omega_evolution_form(const CurvatureJacobian& cj, const FormEvaluation& ev,
                                            const PotentialSpec& spec, int chi, int total_beta)
{
    Eigen::VectorXd out = coupling_form(cj, ev.omega);
    const double a = spec.alpha;
    const Eigen::VectorXd& w = ev.weight;
    if (spec.normalization.is_explicit()) {
        out += (a * ev.s * w.array() * ev.omega.array()).matrix();
        return out;
    }
    const double c = spec.normalization.numerator(chi, total_beta);
    if (c == 0.0) {
        return out;
    }
    const double wsum = w.sum();
    const double wo = w.dot(ev.omega);
    for (int i = 0; i < out.size(); ++i) {
        out[i] += a * ev.s * ev.s * w[i] / c * (ev.omega[i] * wsum - wo);
    }
    return out;
}

/**
 * @brief Diagnostics along a trajectory
 *
 * Curvature identity: J du/dt against coupling_form(-du/dt). For main kinds
 * also d omega/dt = Hess du/dt against omega_evolution_form, and the
 * envelope -a2 t <= u_i(t) - u_i(0) <= -a1 t (non-explicit normalization).
 * Monotonicity of G is recorded, never asserted.
 */
inline DiagnosticsReport diagnostics(const FlowSpec& spec, const WeightedTriangulation& wt,
                                     const Trajectory& traj)
{
    DiagnosticsReport rep;
    if (traj.records.empty()) {
        return rep;
    }
    const Geometry geom = spec.geometry();
    const auto beta = effective_beta(spec.potential, wt);
    const int chi = euler_characteristic(wt);
    const bool main_kind = spec.kind() == PotentialKind::main_E ||
                           spec.kind() == PotentialKind::main_H;
    rep.envelope_checked =
        spec.kind() == PotentialKind::main_E && !spec.potential.normalization.is_explicit();
    Envelope env;
    if (rep.envelope_checked) {
        env = envelope_constants(wt, beta, spec.potential.normalization);
        rep.min_envelope_margin = std::numeric_limits<double>::infinity();
    }
    if (main_kind) {
        rep.max_omega_identity_residual = 0.0;
    }
    const Eigen::VectorXd& u0 = traj.records.front().u;

    for (std::size_t k = 0; k < traj.records.size(); ++k) {
        const auto& rec = traj.records[k];
        DiagnosticSample s;
        s.t = rec.t;
        s.G_max = rec.G_max;
        s.G_min = rec.G_min;
        if (s.G_min > s.G_max || (geom == Geometry::hyperbolic && (s.G_min > 0 || s.G_max < 0))) {
            rep.G_ordered = false;
        }

        const auto m = from_u(geom, rec.u);
        const auto cj = curvature_jacobian(wt, m);
        const Eigen::VectorXd dK = cj.J * rec.field;
        s.curvature_identity_residual = (dK - coupling_form(cj, -rec.field)).cwiseAbs().maxCoeff();
        rep.max_curvature_identity_residual =
            std::max(rep.max_curvature_identity_residual, s.curvature_identity_residual);

        if (main_kind) {
            const auto ev = evaluate_form(spec.potential, wt, rec.u);
            const Eigen::VectorXd domega = potential_hessian(spec.potential, wt, rec.u) * rec.field;
            const auto form = omega_evolution_form(cj, ev, spec.potential, chi, beta.total_order());
            s.omega_identity_residual = (domega - form).cwiseAbs().maxCoeff();
            rep.max_omega_identity_residual =
                std::max(rep.max_omega_identity_residual, s.omega_identity_residual);
        }
        if (rep.envelope_checked) {
            const Eigen::VectorXd du = rec.u - u0;
            double margin = std::numeric_limits<double>::infinity();
            for (int i = 0; i < du.size(); ++i) {
                margin = std::min({margin, du[i] + env.a2[i] * rec.t, -env.a1[i] * rec.t - du[i]});
            }
            s.envelope_margin = margin;
            rep.min_envelope_margin = std::min(rep.min_envelope_margin, margin);
        }
        if (k > 0) {
            const auto& prev = rep.samples.back();
            if (s.G_max > prev.G_max + 1e-12) {
                rep.G_max_nonincreasing = false;
            }
            if (s.G_min < prev.G_min - 1e-12) {
                rep.G_min_nondecreasing = false;
            }
        }
        rep.samples.push_back(s);
    }
    return rep;
}

/** @brief Gradient-sum tracking for main kinds */
struct NormalizationProbe {
    std::string normalization;
    double expected_euclidean{std::numeric_limits<double>::quiet_NaN()};  ///< 2 pi sum(beta)
    double min_sum{0.0};
    double max_sum{0.0};
    double first_sum{0.0};
    double last_sum{0.0};
    double max_identity_residual{0.0};  ///< |sum omega - (area + 2 pi sum beta)|, literal only
    bool strictly_positive{false};      ///< every record has sum > 0
    bool obstructs_convergence{false};  ///< running infimum stays above N * tolerance
};

/**
 * @brief Track sum_i omega_i(u(t))
 *
 * Under the literal normalization the sum equals 2 pi sum(beta) plus the
 * total hyperbolic area. If its infimum stays above N * convergence_tol,
 * ||omega||_inf can never drop below the tolerance and no stationary point
 * is reachable.
 */
inline NormalizationProbe literal_normalization_probe(const FlowSpec& spec,
                                                      const WeightedTriangulation& wt,
                                                      const Trajectory& traj,
                                                      double convergence_tol = 1e-10)
{
    if (!uses_normalization(spec.kind())) {
        throw DomainError("the normalization probe applies to main kinds");
    }
    NormalizationProbe p;
    p.normalization = spec.potential.normalization.str();
    const auto beta = effective_beta(spec.potential, wt);
    const double two_pi_beta = 2.0 * std::numbers::pi * beta.total_order();
    p.expected_euclidean = two_pi_beta;
    if (traj.records.empty()) {
        return p;
    }
    p.first_sum = traj.records.front().omega_sum;
    p.last_sum = traj.records.back().omega_sum;
    p.min_sum = std::numeric_limits<double>::infinity();
    p.max_sum = -std::numeric_limits<double>::infinity();
    const bool literal = spec.potential.normalization.kind == Normalization::Kind::literal;
    for (const auto& r : traj.records) {
        p.min_sum = std::min(p.min_sum, r.omega_sum);
        p.max_sum = std::max(p.max_sum, r.omega_sum);
        if (literal && spec.kind() != PotentialKind::sinh_variant_H) {
            p.max_identity_residual = std::max(
                p.max_identity_residual, std::abs(r.omega_sum - (r.total_area + two_pi_beta)));
        }
    }
    p.strictly_positive = p.min_sum > 0.0;
    p.obstructs_convergence = p.min_sum > wt.vertex_count() * convergence_tol;
    return p;
}

}  // namespace alphaflow
