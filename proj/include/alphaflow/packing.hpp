#pragma once

#include <charconv>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "alphaflow/errors.hpp"
#include "alphaflow/geometry.hpp"
#include "alphaflow/surface.hpp"

namespace alphaflow
{

/**
 * @brief Circle packing metric: one radius per vertex in a background geometry
 *
 * The u-view is u_i = ln r_i (euclidean) or ln tanh(r_i/2) (hyperbolic).
 */
struct PackingMetric {
    Geometry geom{Geometry::euclidean};
    Eigen::VectorXd r;

    PackingMetric() = default;

    /** @throws DomainError on a non-positive or non-finite radius */
    PackingMetric(Geometry g, Eigen::VectorXd radii) : geom{g}, r{std::move(radii)}
    {
        for (int i = 0; i < r.size(); ++i) {
            if (!(r[i] > 0.0) || !std::isfinite(r[i])) {
                throw DomainError("radius " + std::to_string(i) + " must be positive and finite");
            }
        }
    }

    [[nodiscard]] int size() const { return static_cast<int>(r.size()); }

    /** @brief Uniform metric with every radius equal to r0 */
    static PackingMetric uniform(Geometry g, int n, double r0)
    {
        return {g, Eigen::VectorXd::Constant(n, r0)};
    }
};

/** @brief u-coordinates of a metric */
inline Eigen::VectorXd to_u(const PackingMetric& m)
{
    Eigen::VectorXd u(m.size());
    for (int i = 0; i < m.size(); ++i) {
        u[i] = radius_to_u(m.geom, m.r[i]);
    }
    return u;
}

/** @throws DomainError when a hyperbolic coordinate is not negative */
inline PackingMetric from_u(Geometry geom, const Eigen::VectorXd& u)
{
    Eigen::VectorXd r(u.size());
    for (int i = 0; i < u.size(); ++i) {
        if (!std::isfinite(u[i])) {
            throw DomainError("u-coordinate " + std::to_string(i) + " is not finite");
        }
        r[i] = u_to_radius(geom, u[i]);
    }
    return {geom, std::move(r)};
}

/** @brief Is u inside the coordinate domain (R^N or the negative orthant)? */
inline bool in_domain(Geometry geom, const Eigen::VectorXd& u)
{
    for (int i = 0; i < u.size(); ++i) {
        if (!std::isfinite(u[i]) || (geom == Geometry::hyperbolic && !(u[i] < 0.0))) {
            return false;
        }
    }
    return true;
}

/**
 * @brief Per-vertex alpha-weights r_i^alpha (euclidean) or tanh^alpha(r_i/2) (hyperbolic)
 *
 * Both equal exp(alpha u_i).
 */
inline Eigen::VectorXd alpha_weights(const Eigen::VectorXd& u, double alpha)
{
    return (alpha * u.array()).exp().matrix();
}

inline Eigen::VectorXd alpha_weights(const PackingMetric& m, double alpha)
{
    return alpha_weights(to_u(m), alpha);
}

/** @brief sum of alpha-weights: ||r||_alpha^alpha or ||tanh(r/2)||_alpha^alpha */
inline double alpha_norm(const PackingMetric& m, double alpha)
{
    return alpha_weights(m, alpha).sum();
}

/** @brief Which constant enters the normalization s_alpha */
struct Normalization {
    enum class Kind { literal, branched, explicit_value };
    Kind kind{Kind::literal};
    double value{0.0};  ///< used by explicit_value only

    static Normalization literal() { return {Kind::literal, 0.0}; }
    static Normalization branched() { return {Kind::branched, 0.0}; }

    /** @throws DomainError for a non-finite s */
    static Normalization explicit_s(double s)
    {
        if (!std::isfinite(s)) {
            throw DomainError("explicit normalization must be finite");
        }
        return {Kind::explicit_value, s};
    }

    /** @brief Default per geometry: branched for euclidean, literal for hyperbolic */
    static Normalization default_for(Geometry g)
    {
        return g == Geometry::euclidean ? branched() : literal();
    }

    [[nodiscard]] std::string str() const
    {
        switch (kind) {
            case Kind::literal:
                return "literal";
            case Kind::branched:
                return "branched";
            case Kind::explicit_value: {
                char buf[64];
                const auto res = std::to_chars(buf, buf + sizeof buf, value);
                return "explicit=" + std::string(buf, res.ptr);
            }
        }
        return "?";
    }

    /** @brief Parse "literal", "branched" or "explicit=S" */
    static Normalization parse(std::string_view s)
    {
        if (s == "literal") {
            return literal();
        }
        if (s == "branched") {
            return branched();
        }
        if (s.starts_with("explicit=")) {
            const auto num = s.substr(9);
            double v = 0.0;
            const auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
            if (ec != std::errc{} || p != num.data() + num.size()) {
                throw DomainError("malformed explicit normalization '" + std::string(s) + "'");
            }
            return explicit_s(v);
        }
        throw DomainError("unknown normalization '" + std::string(s) + "'");
    }

    [[nodiscard]] bool is_explicit() const { return kind == Kind::explicit_value; }

    /**
     * @brief Numerator c of s = c / alpha_norm: 2 pi chi or 2 pi (chi + sum beta)
     * @throws DomainError for explicit normalization, which has no numerator
     */
    [[nodiscard]] double numerator(int chi, int total_beta) const
    {
        switch (kind) {
            case Kind::literal:
                return 2.0 * std::numbers::pi * chi;
            case Kind::branched:
                return 2.0 * std::numbers::pi * (chi + total_beta);
            case Kind::explicit_value:
                break;
        }
        throw DomainError("explicit normalization has no numerator");
    }

    /** @brief s_alpha for a given weight sum */
    [[nodiscard]] double constant(int chi, int total_beta, double weight_sum) const
    {
        if (kind == Kind::explicit_value) {
            return value;
        }
        if (!(weight_sum > 0.0)) {
            throw DomainError("normalization needs a positive weight sum");
        }
        return numerator(chi, total_beta) / weight_sum;
    }
};

/** @brief s_alpha under a normalization strategy */
inline double normalization(const Normalization& strategy, const WeightedTriangulation& wt,
                            const PackingMetric& m, double alpha, const BranchAssignment& beta)
{
    check_branch_size(wt, beta);
    return strategy.constant(euler_characteristic(wt), beta.total_order(), alpha_norm(m, alpha));
}

namespace detail
{

inline void require_alpha(double alpha)
{
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw DomainError("alpha must be a finite non-negative number");
    }
}

inline Eigen::VectorXd branch_term(const BranchAssignment& beta)
{
    Eigen::VectorXd b(beta.size());
    for (int i = 0; i < beta.size(); ++i) {
        b[i] = 2.0 * std::numbers::pi * beta[i];
    }
    return b;
}

}  // namespace detail

/** @brief Area element pi r^alpha (euclidean) or 4 pi sinh^alpha(r/2) (hyperbolic) */
inline Eigen::VectorXd area_elements(const PackingMetric& m, double alpha)
{
    Eigen::VectorXd A(m.size());
    for (int i = 0; i < m.size(); ++i) {
        if (m.geom == Geometry::euclidean) {
            A[i] = std::numbers::pi * std::exp(alpha * std::log(m.r[i]));
        }
        else {
            A[i] = 4.0 * std::numbers::pi * std::exp(alpha * std::log(std::sinh(m.r[i] / 2.0)));
        }
    }
    return A;
}

/**
 * @brief Curvature quantities of one metric
 *
 * s_alpha and alpha_norm are filled by curvature_field(); R_area and A only
 * when area elements were requested.
 */
struct CurvatureField {
    Eigen::VectorXd K;
    Eigen::VectorXd B;       ///< (K + 2 pi beta) / weight
    Eigen::VectorXd A;       ///< area elements
    Eigen::VectorXd R_area;  ///< (K + 2 pi beta) / A
    double s_alpha{0.0};
    double alpha_norm{0.0};
    double total_area{0.0};  ///< sum of hyperbolic face areas (0 for euclidean)
};

/** @brief Branched alpha-curvature B_i = (K_i + 2 pi beta_i) / exp(alpha u_i) */
inline Eigen::VectorXd alpha_curvature(const WeightedTriangulation& wt, const PackingMetric& m,
                                       double alpha, const BranchAssignment& beta)
{
    detail::require_alpha(alpha);
    check_branch_size(wt, beta);
    const Eigen::VectorXd Kb = curvature(wt, m.geom, m.r) + detail::branch_term(beta);
    if (alpha == 0.0) {
        return Kb;
    }
    return (Kb.array() / alpha_weights(m, alpha).array()).matrix();
}

/** @brief K, B, A, R_{H,A}, s_alpha and alpha_norm together */
inline CurvatureField curvature_field(const WeightedTriangulation& wt, const PackingMetric& m,
                                      double alpha, const BranchAssignment& beta,
                                      const Normalization& strategy)
{
    detail::require_alpha(alpha);
    check_branch_size(wt, beta);
    CurvatureField cf;
    const auto cd = curvature_detail(wt, m.geom, m.r);
    cf.K = cd.K;
    cf.total_area = m.geom == Geometry::hyperbolic ? cd.total_area : 0.0;
    const Eigen::VectorXd Kb = cf.K + detail::branch_term(beta);
    const Eigen::VectorXd w = alpha_weights(m, alpha);
    cf.B = alpha == 0.0 ? Kb : (Kb.array() / w.array()).matrix();
    cf.alpha_norm = w.sum();
    cf.s_alpha = strategy.constant(euler_characteristic(wt), beta.total_order(), cf.alpha_norm);
    cf.A = area_elements(m, alpha);
    cf.R_area = (Kb.array() / cf.A.array()).matrix();
    return cf;
}

/** @brief Area elements A and branched A-curvature R_{H,A} = (K + 2 pi beta) / A */
inline CurvatureField area_curvature(const WeightedTriangulation& wt, const PackingMetric& m,
                                     double alpha, const BranchAssignment& beta)
{
    detail::require_alpha(alpha);
    check_branch_size(wt, beta);
    CurvatureField cf;
    const auto cd = curvature_detail(wt, m.geom, m.r);
    cf.K = cd.K;
    cf.total_area = m.geom == Geometry::hyperbolic ? cd.total_area : 0.0;
    cf.A = area_elements(m, alpha);
    cf.R_area = ((cf.K + detail::branch_term(beta)).array() / cf.A.array()).matrix();
    return cf;
}

/**
 * @brief d(K + 2 pi beta)/du with its coupling decomposition
 *
 * C_ij = -J_ij for neighbors (0 otherwise), S_i = sum_j J_ij. In the
 * euclidean case S vanishes; in the hyperbolic case it is positive.
 */
struct CurvatureJacobian {
    Eigen::MatrixXd J;
    Eigen::MatrixXd C;
    Eigen::VectorXd S;

    [[nodiscard]] double symmetry_defect() const
    {
        return (J - J.transpose()).cwiseAbs().maxCoeff();
    }
};

namespace detail
{

inline CurvatureJacobian decompose(const WeightedTriangulation& wt, Eigen::MatrixXd J)
{
    CurvatureJacobian cj;
    const int n = wt.vertex_count();
    cj.C = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : wt.edges()) {
        cj.C(e.lo, e.hi) = -J(e.lo, e.hi);
        cj.C(e.hi, e.lo) = -J(e.hi, e.lo);
    }
    cj.S = J.rowwise().sum();
    cj.J = std::move(J);
    return cj;
}

}  // namespace detail

/**
 * @brief Jacobian of the curvature in u-coordinates
 *
 * Analytic mode sums per-face angle-derivative blocks in face order;
 * finite_difference mode takes central differences of K in u.
 */
inline CurvatureJacobian curvature_jacobian(const WeightedTriangulation& wt,
                                            const PackingMetric& m,
                                            DerivativeMode mode = DerivativeMode::analytic)
{
    const int n = wt.vertex_count();
    if (m.size() != n) {
        throw DomainError("metric has wrong length");
    }
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    if (mode == DerivativeMode::finite_difference) {
        const Eigen::VectorXd u = to_u(m);
        const double h = kFiniteDifferenceStep;
        for (int j = 0; j < n; ++j) {
            Eigen::VectorXd up = u, um = u;
            up[j] += h;
            um[j] -= h;
            const auto Kp = curvature(wt, m.geom, from_u(m.geom, up).r);
            const auto Km = curvature(wt, m.geom, from_u(m.geom, um).r);
            J.col(j) = (Kp - Km) / (2.0 * h);
        }
        return detail::decompose(wt, std::move(J));
    }
    for (int f = 0; f < wt.face_count(); ++f) {
        const auto [rad, phi] = face_data(wt, m.r, f);
        Eigen::Matrix3d D;
        try {
            D = angle_derivative_block(m.geom, rad, phi);
        }
        catch (const DegenerateGeometry& e) {
            throw DegenerateGeometry(e.what(), f);
        }
        const auto& t = wt.faces()[f];
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                J(t[a], t[b]) -= D(a, b);
            }
        }
    }
    return detail::decompose(wt, std::move(J));
}

/**
 * @brief sum_i (K_i + 2 pi beta_i - s_alpha w_i)
 *
 * Under the literal normalization this is 2 pi sum(beta) (euclidean) or
 * total area + 2 pi sum(beta) (hyperbolic), whatever the metric.
 */
inline double gradient_sum_residual(const WeightedTriangulation& wt, const PackingMetric& m,
                                    double alpha, const BranchAssignment& beta,
                                    const Normalization& strategy)
{
    const auto cf = curvature_field(wt, m, alpha, beta, strategy);
    const Eigen::VectorXd w = alpha_weights(m, alpha);
    return (cf.K + detail::branch_term(beta) - cf.s_alpha * w).sum();
}

}  // namespace alphaflow
