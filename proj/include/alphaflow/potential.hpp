#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <boost/math/quadrature/gauss.hpp>

#include "alphaflow/errors.hpp"
#include "alphaflow/geometry.hpp"
#include "alphaflow/linalg.hpp"
#include "alphaflow/packing.hpp"
#include "alphaflow/surface.hpp"

namespace alphaflow
{

/** @brief The seven one-form families */
enum class PotentialKind {
    main_E,
    main_H,
    sinh_variant_H,
    prescribed_E,
    prescribed_tanh_H,
    area_E,
    area_H,
};

inline const std::vector<PotentialKind>& all_potential_kinds()
{
    static const std::vector<PotentialKind> kinds{
        PotentialKind::main_E,       PotentialKind::main_H,          PotentialKind::sinh_variant_H,
        PotentialKind::prescribed_E, PotentialKind::prescribed_tanh_H, PotentialKind::area_E,
        PotentialKind::area_H};
    return kinds;
}

inline std::string to_string(PotentialKind k)
{
    switch (k) {
        case PotentialKind::main_E:
            return "main_E";
        case PotentialKind::main_H:
            return "main_H";
        case PotentialKind::sinh_variant_H:
            return "sinh_variant_H";
        case PotentialKind::prescribed_E:
            return "prescribed_E";
        case PotentialKind::prescribed_tanh_H:
            return "prescribed_tanh_H";
        case PotentialKind::area_E:
            return "area_E";
        case PotentialKind::area_H:
            return "area_H";
    }
    return "?";
}

inline PotentialKind parse_potential_kind(std::string_view s)
{
    for (auto k : all_potential_kinds()) {
        if (to_string(k) == s) {
            return k;
        }
    }
    throw DomainError("unknown kind '" + std::string(s) + "'");
}

inline Geometry geometry_of(PotentialKind k)
{
    switch (k) {
        case PotentialKind::main_E:
        case PotentialKind::prescribed_E:
        case PotentialKind::area_E:
            return Geometry::euclidean;
        default:
            return Geometry::hyperbolic;
    }
}

/** @brief Kinds whose constant comes from a normalization strategy */
inline bool uses_normalization(PotentialKind k)
{
    return k == PotentialKind::main_E || k == PotentialKind::main_H ||
           k == PotentialKind::sinh_variant_H;
}

/** @brief Kinds driven by a prescribed curvature vector */
inline bool uses_rbar(PotentialKind k)
{
    return !uses_normalization(k);
}

inline bool is_area_kind(PotentialKind k)
{
    return k == PotentialKind::area_E || k == PotentialKind::area_H;
}

/** @brief Every kind except the sinh variant integrates a closed form */
inline bool is_closed(PotentialKind k)
{
    return k != PotentialKind::sinh_variant_H;
}

/**
 * @brief Parameters of one potential
 *
 * An empty beta means no branch points; an empty base means the default base
 * point (u = 0 euclidean, u = ln tanh(1/2) hyperbolic, i.e. r = 1).
 */
struct PotentialSpec {
    PotentialKind kind{PotentialKind::main_E};
    double alpha{0.0};
    BranchAssignment beta;
    Normalization normalization{Normalization::literal()};
    Eigen::VectorXd rbar;
    Eigen::VectorXd base;

    [[nodiscard]] Geometry geometry() const { return geometry_of(kind); }
};

/** @brief beta, or zeros when PotentialSpec::beta is empty */
inline BranchAssignment effective_beta(const PotentialSpec& spec, const WeightedTriangulation& wt)
{
    if (spec.beta.size() == 0) {
        return BranchAssignment::none(wt.vertex_count());
    }
    check_branch_size(wt, spec.beta);
    return spec.beta;
}

/** @brief Base point of the potential */
inline Eigen::VectorXd base_point(const PotentialSpec& spec, const WeightedTriangulation& wt)
{
    if (spec.base.size() > 0) {
        if (spec.base.size() != wt.vertex_count() || !in_domain(spec.geometry(), spec.base)) {
            throw DomainError("base point outside the domain of " + to_string(spec.kind));
        }
        return spec.base;
    }
    return Eigen::VectorXd::Constant(wt.vertex_count(), radius_to_u(spec.geometry(), 1.0));
}

/**
 * @brief Prescribed curvature admissible for the convexity statements:
 * every component <= 0 and, when alpha > 0, at least one strictly negative
 */
inline bool rbar_supports_convexity(const PotentialSpec& spec)
{
    if (!uses_rbar(spec.kind) || spec.rbar.size() == 0) {
        return false;
    }
    if (spec.rbar.maxCoeff() > 0.0) {
        return false;
    }
    return spec.alpha == 0.0 || spec.rbar.minCoeff() < 0.0;
}

/**
 * @brief Prescribed curvature realized by a metric: B_alpha for prescribed
 * kinds, R_{H,A} for area kinds
 */
inline Eigen::VectorXd rbar_from_metric(PotentialKind kind, const WeightedTriangulation& wt,
                                        const PackingMetric& m, double alpha,
                                        const BranchAssignment& beta)
{
    if (!uses_rbar(kind)) {
        throw DomainError(to_string(kind) + " has no prescribed curvature");
    }
    if (m.geom != geometry_of(kind)) {
        throw DomainError("metric geometry does not match " + to_string(kind));
    }
    if (is_area_kind(kind)) {
        return area_curvature(wt, m, alpha, beta).R_area;
    }
    return alpha_curvature(wt, m, alpha, beta);
}

/** @brief One-form value together with the quantities it was built from */
struct FormEvaluation {
    Eigen::VectorXd omega;
    Eigen::VectorXd K;
    Eigen::VectorXd weight;  ///< exp(alpha u), sinh^alpha(r/2) or the area element
    double s{std::numeric_limits<double>::quiet_NaN()};  ///< normalization, when used
    double total_area{0.0};
    double min_angle{0.0};
};

namespace detail
{

inline void check_spec(const PotentialSpec& spec, const WeightedTriangulation& wt,
                       const Eigen::VectorXd& u)
{
    require_alpha(spec.alpha);
    const int n = wt.vertex_count();
    if (u.size() != n) {
        throw DomainError("u has " + std::to_string(u.size()) + " entries for " +
                          std::to_string(n) + " vertices");
    }
    if (!in_domain(spec.geometry(), u)) {
        throw DomainError("u outside the domain of " + to_string(spec.kind));
    }
    if (uses_rbar(spec.kind) && spec.rbar.size() != n) {
        throw DomainError(to_string(spec.kind) + " needs a prescribed curvature per vertex");
    }
}

/// sinh^alpha(r/2) from u: exp(alpha u) (1 - e^{2u})^{-alpha/2}
inline Eigen::VectorXd sinh_weights(const Eigen::VectorXd& u, double alpha)
{
    Eigen::VectorXd w(u.size());
    for (int i = 0; i < u.size(); ++i) {
        w[i] = std::exp(alpha * u[i] - 0.5 * alpha * std::log1p(-std::exp(2.0 * u[i])));
    }
    return w;
}

/// cosh^2(r/2) = 1 / (1 - tanh^2(r/2)) = 1 / (1 - e^{2u})
inline Eigen::VectorXd cosh2_half(const Eigen::VectorXd& u)
{
    return (1.0 / (-(2.0 * u.array()).exp() + 1.0)).matrix();
}

}  // namespace detail

/**
 * @brief One-form omega(u) with intermediate quantities
 *
 * main kinds:        K + 2 pi beta - s w,   w = exp(alpha u), s from the normalization
 * sinh_variant_H:    K + 2 pi beta - s w,   w = sinh^alpha(r/2), s = c / sum(w)
 * prescribed kinds:  K + 2 pi beta - rbar w
 * area kinds:        K + 2 pi beta - rbar A
 */
inline FormEvaluation evaluate_form(const PotentialSpec& spec, const WeightedTriangulation& wt,
                                    const Eigen::VectorXd& u)
{
    detail::check_spec(spec, wt, u);
    const auto beta = effective_beta(spec, wt);
    const Geometry geom = spec.geometry();
    const auto m = from_u(geom, u);
    const auto cd = curvature_detail(wt, geom, m.r);

    FormEvaluation ev;
    ev.K = cd.K;
    ev.total_area = geom == Geometry::hyperbolic ? cd.total_area : 0.0;
    ev.min_angle = cd.min_angle;
    const Eigen::VectorXd Kb = cd.K + detail::branch_term(beta);
    const int chi = euler_characteristic(wt);

    switch (spec.kind) {
        case PotentialKind::main_E:
        case PotentialKind::main_H:
            ev.weight = alpha_weights(u, spec.alpha);
            ev.s = spec.normalization.constant(chi, beta.total_order(), ev.weight.sum());
            ev.omega = Kb - ev.s * ev.weight;
            break;
        case PotentialKind::sinh_variant_H:
            ev.weight = detail::sinh_weights(u, spec.alpha);
            ev.s = spec.normalization.constant(chi, beta.total_order(), ev.weight.sum());
            ev.omega = Kb - ev.s * ev.weight;
            break;
        case PotentialKind::prescribed_E:
        case PotentialKind::prescribed_tanh_H:
            ev.weight = alpha_weights(u, spec.alpha);
            ev.omega = Kb - (spec.rbar.array() * ev.weight.array()).matrix();
            break;
        case PotentialKind::area_E:
        case PotentialKind::area_H:
            ev.weight = area_elements(m, spec.alpha);
            ev.omega = Kb - (spec.rbar.array() * ev.weight.array()).matrix();
            break;
    }
    return ev;
}

inline Eigen::VectorXd one_form(const PotentialSpec& spec, const WeightedTriangulation& wt,
                                const Eigen::VectorXd& u)
{
    return evaluate_form(spec, wt, u).omega;
}

/**
 * @brief Analytic d omega / d u
 *
 * Symmetric for every closed kind. For sinh_variant_H this is the
 * (non-symmetric) Jacobian of the form, which has no potential.
 */
inline Eigen::MatrixXd potential_hessian(const PotentialSpec& spec, const WeightedTriangulation& wt,
                                         const Eigen::VectorXd& u)
{
    detail::check_spec(spec, wt, u);
    const Geometry geom = spec.geometry();
    const auto m = from_u(geom, u);
    Eigen::MatrixXd H = curvature_jacobian(wt, m).J;
    const double a = spec.alpha;
    if (a == 0.0 && !uses_normalization(spec.kind)) {
        return H;
    }
    const auto beta = effective_beta(spec, wt);
    const int chi = euler_characteristic(wt);

    switch (spec.kind) {
        case PotentialKind::main_E:
        case PotentialKind::main_H: {
            const Eigen::VectorXd w = alpha_weights(u, a);
            const double sum = w.sum();
            const double s = spec.normalization.constant(chi, beta.total_order(), sum);
            H.diagonal() -= a * s * w;
            if (!spec.normalization.is_explicit()) {
                H += (a * s / sum) * (w * w.transpose());
            }
            break;
        }
        case PotentialKind::sinh_variant_H: {
            const Eigen::VectorXd w = detail::sinh_weights(u, a);
            const Eigen::VectorXd dw = (a * w.array() * detail::cosh2_half(u).array()).matrix();
            const double sum = w.sum();
            const double s = spec.normalization.constant(chi, beta.total_order(), sum);
            H.diagonal() -= s * dw;
            if (!spec.normalization.is_explicit()) {
                H += (s / sum) * (w * dw.transpose());
            }
            break;
        }
        case PotentialKind::prescribed_E:
        case PotentialKind::prescribed_tanh_H: {
            const Eigen::VectorXd w = alpha_weights(u, a);
            H.diagonal() -= a * (spec.rbar.array() * w.array()).matrix();
            break;
        }
        case PotentialKind::area_E: {
            // d(pi r^alpha)/du = alpha pi r^alpha
            const Eigen::VectorXd A = area_elements(m, a);
            H.diagonal() -= a * (spec.rbar.array() * A.array()).matrix();
            break;
        }
        case PotentialKind::area_H: {
            // d(4 pi sinh^alpha(r/2))/du = alpha A cosh^2(r/2)
            const Eigen::VectorXd A = area_elements(m, a);
            H.diagonal() -=
                a * (spec.rbar.array() * A.array() * detail::cosh2_half(u).array()).matrix();
            break;
        }
    }
    return H;
}

/** @brief Central-difference Jacobian of the one-form (step kFiniteDifferenceStep) */
inline Eigen::MatrixXd one_form_jacobian_fd(const PotentialSpec& spec,
                                            const WeightedTriangulation& wt,
                                            const Eigen::VectorXd& u)
{
    const int n = wt.vertex_count();
    const double h = kFiniteDifferenceStep;
    Eigen::MatrixXd M(n, n);
    for (int j = 0; j < n; ++j) {
        Eigen::VectorXd up = u, um = u;
        up[j] += h;
        um[j] -= h;
        M.col(j) = (one_form(spec, wt, up) - one_form(spec, wt, um)) / (2.0 * h);
    }
    return M;
}

/** @brief max_{i != j} |d omega_i/d u_j - d omega_j/d u_i| by central differences */
inline double closedness_defect(const PotentialSpec& spec, const WeightedTriangulation& wt,
                                const Eigen::VectorXd& u)
{
    const Eigen::MatrixXd M = one_form_jacobian_fd(spec, wt, u);
    return asymmetry(M);
}

/**
 * @brief Hessian of main_E restricted to the hyperplane sum(u) = 0,
 * written in an orthonormal basis of that hyperplane
 */
inline Eigen::MatrixXd restricted_hessian_U(const PotentialSpec& spec,
                                            const WeightedTriangulation& wt,
                                            const Eigen::VectorXd& u)
{
    if (spec.kind != PotentialKind::main_E) {
        throw DomainError("restricted Hessian is defined for main_E only");
    }
    const Eigen::MatrixXd Q = mean_zero_basis(wt.vertex_count());
    return Q.transpose() * potential_hessian(spec, wt, u) * Q;
}

/** @brief Composite Gauss-Legendre settings for potential evaluation */
struct QuadratureConfig {
    int initial_panels{4};
    int order{16};  ///< one of 7, 10, 15, 16, 20, 25, 30
    double tolerance{1e-10};
    int max_panels{1 << 14};
};

namespace detail
{

template <unsigned N, class F>
double gauss_panels(F&& f, int panels)
{
    double total = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double a = static_cast<double>(k) / panels;
        const double b = static_cast<double>(k + 1) / panels;
        total += boost::math::quadrature::gauss<double, N>::integrate(f, a, b);
    }
    return total;
}

template <class F>
double gauss_composite(F&& f, int panels, int order)
{
    switch (order) {
        case 7:
            return gauss_panels<7>(f, panels);
        case 10:
            return gauss_panels<10>(f, panels);
        case 15:
            return gauss_panels<15>(f, panels);
        case 16:
            return gauss_panels<16>(f, panels);
        case 20:
            return gauss_panels<20>(f, panels);
        case 25:
            return gauss_panels<25>(f, panels);
        case 30:
            return gauss_panels<30>(f, panels);
        default:
            throw DomainError("unsupported Gauss-Legendre order " + std::to_string(order));
    }
}

/// integral of omega . (b - a) along the segment a -> b, panels doubled to tolerance
inline double segment_integral(const PotentialSpec& spec, const WeightedTriangulation& wt,
                               const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                               const QuadratureConfig& quad, double tol)
{
    const Eigen::VectorXd d = b - a;
    if (d.cwiseAbs().maxCoeff() == 0.0) {
        return 0.0;
    }
    auto g = [&](double t) {
        const Eigen::VectorXd p = a + t * d;
        try {
            return one_form(spec, wt, p).dot(d);
        }
        catch (const Error& e) {
            throw DegenerateGeometry(std::string(e.what()) + " at path parameter t = " +
                                     std::to_string(t));
        }
    };
    int panels = std::max(1, quad.initial_panels);
    double prev = gauss_composite(g, panels, quad.order);
    while (panels < quad.max_panels) {
        panels *= 2;
        const double next = gauss_composite(g, panels, quad.order);
        if (std::abs(next - prev) < tol) {
            return next;
        }
        prev = next;
    }
    throw ConvergenceError("quadrature did not reach tolerance with " + std::to_string(panels) +
                           " panels");
}

}  // namespace detail

/**
 * @brief Line integral of the one-form along a polyline through the given points
 *
 * Each segment is refined separately; the tolerance is split evenly between
 * segments. For sinh_variant_H the value depends on the path.
 */
inline double potential_along_path(const PotentialSpec& spec, const WeightedTriangulation& wt,
                                   const std::vector<Eigen::VectorXd>& points,
                                   const QuadratureConfig& quad = {})
{
    if (!(quad.tolerance > 0.0)) {
        throw DomainError("quadrature tolerance must be positive");
    }
    if (points.size() < 2) {
        return 0.0;
    }
    for (const auto& p : points) {
        if (p.size() != wt.vertex_count() || !in_domain(spec.geometry(), p)) {
            throw DomainError("path point outside the domain of " + to_string(spec.kind));
        }
    }
    const double tol = quad.tolerance / static_cast<double>(points.size() - 1);
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < points.size(); ++k) {
        total += detail::segment_integral(spec, wt, points[k], points[k + 1], quad, tol);
    }
    return total;
}

/** @brief Axis-parallel path from a to b changing coordinate 0 first, then 1, ... */
inline std::vector<Eigen::VectorXd> staircase_path(const Eigen::VectorXd& a,
                                                   const Eigen::VectorXd& b)
{
    std::vector<Eigen::VectorXd> pts{a};
    Eigen::VectorXd p = a;
    for (int i = 0; i < a.size(); ++i) {
        if (p[i] != b[i]) {
            p[i] = b[i];
            pts.push_back(p);
        }
    }
    return pts;
}

/**
 * @brief Potential F(u): integral of the one-form along the straight
 * segment from the base point to u
 */
inline double potential(const PotentialSpec& spec, const WeightedTriangulation& wt,
                        const Eigen::VectorXd& u, const QuadratureConfig& quad = {})
{
    return potential_along_path(spec, wt, {base_point(spec, wt), u}, quad);
}

}  // namespace alphaflow
