#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "alphaflow/errors.hpp"
#include "alphaflow/surface.hpp"

namespace alphaflow
{

/** @brief Background geometry of each triangle */
enum class Geometry { euclidean, hyperbolic };

inline std::string to_string(Geometry g)
{
    return g == Geometry::euclidean ? "euclidean" : "hyperbolic";
}

/** @throws DomainError for an unknown name */
inline Geometry parse_geometry(std::string_view s)
{
    if (s == "euclidean" || s == "E") {
        return Geometry::euclidean;
    }
    if (s == "hyperbolic" || s == "H") {
        return Geometry::hyperbolic;
    }
    throw DomainError("unknown geometry '" + std::string(s) + "'");
}

/** @brief Slack allowed on a law-of-cosines argument before it counts as degenerate */
inline constexpr double kCosineSlack = 1e-12;

/**
 * @brief arccosh(1 + y) for y >= 0 without cancellation near y = 0
 */
template <std::floating_point T>
T acosh1p(T y)
{
    return std::log1p(y + std::sqrt(y * (y + T(2))));
}

/**
 * @brief Length of the edge between circles of radii ri, rj meeting at angle phi
 *
 * Euclidean: sqrt(ri^2 + rj^2 + 2 ri rj cos phi).
 * Hyperbolic: arccosh(cosh ri cosh rj + sinh ri sinh rj cos phi), evaluated
 * as arccosh(1 + y) with y = 2 sinh^2((ri+rj)/2) - 2 sinh ri sinh rj sin^2(phi/2).
 *
 * @throws DomainError on a non-positive radius
 */
template <std::floating_point T>
T edge_length(Geometry geom, T ri, T rj, T phi)
{
    if (!(ri > T(0)) || !(rj > T(0))) {
        throw DomainError("edge_length: radii must be positive");
    }
    if (geom == Geometry::euclidean) {
        return std::sqrt(ri * ri + rj * rj + T(2) * ri * rj * std::cos(phi));
    }
    const T sh = std::sinh((ri + rj) / T(2));
    const T sp = std::sin(phi / T(2));
    const T y = T(2) * sh * sh - T(2) * std::sinh(ri) * std::sinh(rj) * sp * sp;
    return acosh1p(y);
}

namespace detail
{

template <std::floating_point T>
T checked_acos(T c, const char* where)
{
    if (!(c >= T(-1) - T(kCosineSlack) && c <= T(1) + T(kCosineSlack))) {
        throw DegenerateGeometry(std::string(where) + ": cosine argument outside [-1, 1]");
    }
    return std::acos(std::clamp(c, T(-1), T(1)));
}

/// cos of the angle opposite side a, adjacent sides b and c
template <std::floating_point T>
T opposite_cosine(Geometry geom, T a, T b, T c)
{
    if (geom == Geometry::euclidean) {
        return (b * b + c * c - a * a) / (T(2) * b * c);
    }
    return (std::cosh(b) * std::cosh(c) - std::cosh(a)) / (std::sinh(b) * std::sinh(c));
}

template <std::floating_point T>
void require_triangle(T a, T b, T c)
{
    if (!(a > T(0) && b > T(0) && c > T(0)) || !std::isfinite(a) || !std::isfinite(b) ||
        !std::isfinite(c)) {
        throw DegenerateGeometry("triangle has a non-positive or non-finite side");
    }
    if (!(a < b + c && b < a + c && c < a + b)) {
        throw DegenerateGeometry("triangle inequality violated");
    }
}

/// (d theta/da, d theta/db, d theta/dc) for the angle theta opposite a
template <std::floating_point T>
std::array<T, 3> angle_partials(Geometry geom, T a, T b, T c, T theta)
{
    const T s = std::sin(theta);
    if (geom == Geometry::euclidean) {
        const T dca = -a / (b * c);
        const T dcb = (a * a + b * b - c * c) / (T(2) * b * b * c);
        const T dcc = (a * a + c * c - b * b) / (T(2) * b * c * c);
        return {-dca / s, -dcb / s, -dcc / s};
    }
    const T sha = std::sinh(a), shb = std::sinh(b), shc = std::sinh(c);
    const T cha = std::cosh(a), chb = std::cosh(b), chc = std::cosh(c);
    const T dca = -sha / (shb * shc);
    const T dcb = (cha * chb - chc) / (shb * shb * shc);
    const T dcc = (cha * chc - chb) / (shb * shc * shc);
    return {-dca / s, -dcb / s, -dcc / s};
}

/// d l_ij / d u_i (the u-coordinate of the first radius)
template <std::floating_point T>
T length_partial_u(Geometry geom, T ri, T rj, T phi, T l)
{
    if (geom == Geometry::euclidean) {
        return ri * (ri + rj * std::cos(phi)) / l;
    }
    const T dl_dr =
        (std::sinh(ri) * std::cosh(rj) + std::cosh(ri) * std::sinh(rj) * std::cos(phi)) /
        std::sinh(l);
    return std::sinh(ri) * dl_dr;
}

}  // namespace detail

/**
 * @brief Inner angles (theta_i, theta_j, theta_k) of the triangle with sides
 * l_ij, l_jk, l_ki; theta_i is opposite l_jk
 *
 * @throws DegenerateGeometry when a strict triangle inequality fails
 */
template <std::floating_point T>
std::array<T, 3> inner_angles(Geometry geom, T l_ij, T l_jk, T l_ki)
{
    detail::require_triangle(l_ij, l_jk, l_ki);
    const char* where = "inner_angles";
    return {detail::checked_acos(detail::opposite_cosine(geom, l_jk, l_ij, l_ki), where),
            detail::checked_acos(detail::opposite_cosine(geom, l_ki, l_ij, l_jk), where),
            detail::checked_acos(detail::opposite_cosine(geom, l_ij, l_jk, l_ki), where)};
}

/** @brief Metric data of one face: sides, angles, area */
struct TriangleGeometry {
    std::array<double, 3> lengths{};  ///< l_ij, l_jk, l_ki for face (i, j, k)
    std::array<double, 3> angles{};   ///< theta_i, theta_j, theta_k
    double area{0.0};                 ///< hyperbolic: pi - angle sum; euclidean: Heron
};

/** @brief Heron's formula in the cancellation-free ordering */
inline double euclidean_area(double a, double b, double c)
{
    std::array<double, 3> s{a, b, c};
    std::sort(s.begin(), s.end(), std::greater<>());
    const double x = s[0], y = s[1], z = s[2];
    const double p = (x + (y + z)) * (z - (x - y)) * (z + (x - y)) * (x + (y - z));
    return 0.25 * std::sqrt(std::max(p, 0.0));
}

/** @brief Triangle geometry from three radii and the weights of edges ij, jk, ki */
inline TriangleGeometry triangle_geometry(Geometry geom, std::array<double, 3> r,
                                          std::array<double, 3> phi)
{
    TriangleGeometry tg;
    tg.lengths = {edge_length(geom, r[0], r[1], phi[0]), edge_length(geom, r[1], r[2], phi[1]),
                  edge_length(geom, r[2], r[0], phi[2])};
    tg.angles = inner_angles(geom, tg.lengths[0], tg.lengths[1], tg.lengths[2]);
    if (geom == Geometry::hyperbolic) {
        tg.area = std::numbers::pi - (tg.angles[0] + tg.angles[1] + tg.angles[2]);
    }
    else {
        tg.area = euclidean_area(tg.lengths[0], tg.lengths[1], tg.lengths[2]);
    }
    return tg;
}

/** @brief Radii of face f and the weights of its edges (v0v1, v1v2, v2v0) */
inline std::pair<std::array<double, 3>, std::array<double, 3>> face_data(
    const WeightedTriangulation& wt, const Eigen::VectorXd& r, int f)
{
    const auto& t = wt.faces()[f];
    const auto& fe = wt.face_edges(f);
    return {{r[t[0]], r[t[1]], r[t[2]]},
            {wt.weights()[fe[0]], wt.weights()[fe[1]], wt.weights()[fe[2]]}};
}

/**
 * @brief Geometry of face f under radii r
 * @throws DegenerateGeometry identifying the face
 */
inline TriangleGeometry triangle_geometry(Geometry geom, const WeightedTriangulation& wt,
                                          const Eigen::VectorXd& r, int f)
{
    const auto [rad, phi] = face_data(wt, r, f);
    try {
        return triangle_geometry(geom, rad, phi);
    }
    catch (const DegenerateGeometry& e) {
        throw DegenerateGeometry(e.what(), f);
    }
}

/** @brief u-coordinate of a radius: ln r (euclidean) or ln tanh(r/2) (hyperbolic) */
inline double radius_to_u(Geometry geom, double r)
{
    if (!(r > 0.0)) {
        throw DomainError("radius must be positive");
    }
    if (geom == Geometry::euclidean) {
        return std::log(r);
    }
    // ln tanh(r/2) = ln(1 - e^-r) - ln(1 + e^-r)
    const double e = std::exp(-r);
    return std::log(-std::expm1(-r)) - std::log1p(e);
}

/** @brief Inverse of radius_to_u; hyperbolic needs u < 0 */
inline double u_to_radius(Geometry geom, double u)
{
    if (geom == Geometry::euclidean) {
        return std::exp(u);
    }
    if (!(u < 0.0)) {
        throw DomainError("hyperbolic u-coordinate must be negative");
    }
    return 2.0 * std::atanh(std::exp(u));
}

/** @brief How angle derivatives are evaluated */
enum class DerivativeMode { analytic, finite_difference };

/** @brief Step used by every central-difference evaluation in u */
inline constexpr double kFiniteDifferenceStep = 1e-6;

/**
 * @brief 3x3 block of d theta_m / d u_n for one triangle
 *
 * Rows are angles at the three corners, columns the corners' u-coordinates,
 * both in face order. Analytic mode differentiates the law of cosines and
 * the length formulas through the chain rule; finite_difference mode takes
 * central differences in u.
 */
inline Eigen::Matrix3d angle_derivative_block(Geometry geom, std::array<double, 3> r,
                                              std::array<double, 3> phi,
                                              DerivativeMode mode = DerivativeMode::analytic)
{
    Eigen::Matrix3d D;
    if (mode == DerivativeMode::finite_difference) {
        std::array<double, 3> u{};
        for (int k = 0; k < 3; ++k) {
            u[k] = radius_to_u(geom, r[k]);
        }
        const double h = kFiniteDifferenceStep;
        for (int n = 0; n < 3; ++n) {
            auto rp = r;
            auto rm = r;
            rp[n] = u_to_radius(geom, u[n] + h);
            rm[n] = u_to_radius(geom, u[n] - h);
            const auto tp = triangle_geometry(geom, rp, phi).angles;
            const auto tm = triangle_geometry(geom, rm, phi).angles;
            for (int m = 0; m < 3; ++m) {
                D(m, n) = (tp[m] - tm[m]) / (2.0 * h);
            }
        }
        return D;
    }

    const auto tg = triangle_geometry(geom, r, phi);
    const double l01 = tg.lengths[0], l12 = tg.lengths[1], l20 = tg.lengths[2];

    // A(m, e): d theta_m / d l_e with edges ordered (l01, l12, l20)
    Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
    {
        // theta_0: opposite l12, adjacent l01 and l20
        const auto p = detail::angle_partials(geom, l12, l01, l20, tg.angles[0]);
        A(0, 1) = p[0];
        A(0, 0) = p[1];
        A(0, 2) = p[2];
    }
    {
        // theta_1: opposite l20, adjacent l01 and l12
        const auto p = detail::angle_partials(geom, l20, l01, l12, tg.angles[1]);
        A(1, 2) = p[0];
        A(1, 0) = p[1];
        A(1, 1) = p[2];
    }
    {
        // theta_2: opposite l01, adjacent l12 and l20
        const auto p = detail::angle_partials(geom, l01, l12, l20, tg.angles[2]);
        A(2, 0) = p[0];
        A(2, 1) = p[1];
        A(2, 2) = p[2];
    }

    // L(e, n): d l_e / d u_n
    Eigen::Matrix3d L = Eigen::Matrix3d::Zero();
    L(0, 0) = detail::length_partial_u(geom, r[0], r[1], phi[0], l01);
    L(0, 1) = detail::length_partial_u(geom, r[1], r[0], phi[0], l01);
    L(1, 1) = detail::length_partial_u(geom, r[1], r[2], phi[1], l12);
    L(1, 2) = detail::length_partial_u(geom, r[2], r[1], phi[1], l12);
    L(2, 2) = detail::length_partial_u(geom, r[2], r[0], phi[2], l20);
    L(2, 0) = detail::length_partial_u(geom, r[0], r[2], phi[2], l20);

    D = A * L;
    return D;
}

/**
 * @brief Convert a u-derivative block to r-derivatives: d theta/d r_n = D(m,n) / (dr_n/du_n)
 *
 * dr/du is r (euclidean) or sinh r (hyperbolic).
 */
inline Eigen::Matrix3d to_radius_derivatives(Geometry geom, const Eigen::Matrix3d& D,
                                             std::array<double, 3> r)
{
    Eigen::Matrix3d out = D;
    for (int n = 0; n < 3; ++n) {
        const double drdu = geom == Geometry::euclidean ? r[n] : std::sinh(r[n]);
        out.col(n) /= drdu;
    }
    return out;
}

/** @brief Per-face angles and areas together with the vertex curvatures */
struct CurvatureDetail {
    Eigen::VectorXd K;
    std::vector<std::array<double, 3>> angles;  ///< per face, in face vertex order
    std::vector<double> areas;
    double total_area{0.0};
    double min_angle{std::numeric_limits<double>::infinity()};
};

/**
 * @brief Discrete Gauss curvature K_i = 2 pi - sum of angles at i, with per-face data
 *
 * Faces are visited in stored order so sums are reproducible.
 * @throws DegenerateGeometry identifying the first bad face
 */
inline CurvatureDetail curvature_detail(const WeightedTriangulation& wt, Geometry geom,
                                        const Eigen::VectorXd& r)
{
    if (r.size() != wt.vertex_count()) {
        throw DomainError("radius vector has wrong length");
    }
    CurvatureDetail cd;
    cd.K = Eigen::VectorXd::Constant(wt.vertex_count(), 2.0 * std::numbers::pi);
    cd.angles.resize(wt.face_count());
    cd.areas.resize(wt.face_count());
    for (int f = 0; f < wt.face_count(); ++f) {
        const auto tg = triangle_geometry(geom, wt, r, f);
        const auto& t = wt.faces()[f];
        for (int k = 0; k < 3; ++k) {
            cd.K[t[k]] -= tg.angles[k];
            cd.min_angle = std::min(cd.min_angle, tg.angles[k]);
        }
        cd.angles[f] = tg.angles;
        cd.areas[f] = tg.area;
        cd.total_area += tg.area;
    }
    return cd;
}

/** @brief Vertex curvatures K under radii r */
inline Eigen::VectorXd curvature(const WeightedTriangulation& wt, Geometry geom,
                                 const Eigen::VectorXd& r)
{
    return curvature_detail(wt, geom, r).K;
}

}  // namespace alphaflow
