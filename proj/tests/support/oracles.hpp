#pragma once

// Reference implementations used only by the tests. They share no code with
// the library beyond the triangulation container: textbook formulas in long
// double, plain central differences, and adaptive Simpson quadrature.

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "alphaflow/surface.hpp"

namespace oracle
{

using ld = long double;

inline constexpr ld kPi = 3.141592653589793238462643383279502884L;

inline ld edge_length(bool hyperbolic, ld ri, ld rj, ld phi)
{
    if (!hyperbolic) {
        return std::sqrt(ri * ri + rj * rj + 2 * ri * rj * std::cos(phi));
    }
    return std::acosh(std::cosh(ri) * std::cosh(rj) + std::sinh(ri) * std::sinh(rj) * std::cos(phi));
}

/// angle opposite side a
inline ld angle(bool hyperbolic, ld a, ld b, ld c)
{
    const ld cs = hyperbolic
                      ? (std::cosh(b) * std::cosh(c) - std::cosh(a)) / (std::sinh(b) * std::sinh(c))
                      : (b * b + c * c - a * a) / (2 * b * c);
    return std::acos(cs);
}

/// u -> r by the defining relations u = ln r or u = ln tanh(r/2)
inline ld radius(bool hyperbolic, ld u)
{
    return hyperbolic ? 2 * std::atanh(std::exp(u)) : std::exp(u);
}

inline std::array<ld, 3> face_angles(bool hyperbolic, std::array<ld, 3> r, std::array<ld, 3> phi)
{
    const ld l01 = edge_length(hyperbolic, r[0], r[1], phi[0]);
    const ld l12 = edge_length(hyperbolic, r[1], r[2], phi[1]);
    const ld l20 = edge_length(hyperbolic, r[2], r[0], phi[2]);
    return {angle(hyperbolic, l12, l01, l20), angle(hyperbolic, l20, l01, l12),
            angle(hyperbolic, l01, l12, l20)};
}

/// K and total hyperbolic area from radii
inline std::pair<std::vector<ld>, ld> curvature(const alphaflow::WeightedTriangulation& wt,
                                                bool hyperbolic, const Eigen::VectorXd& r)
{
    std::vector<ld> K(wt.vertex_count(), 2 * kPi);
    ld area = 0;
    for (int f = 0; f < wt.face_count(); ++f) {
        const auto& t = wt.faces()[f];
        const auto& fe = wt.face_edges(f);
        const auto th = face_angles(hyperbolic, {r[t[0]], r[t[1]], r[t[2]]},
                                    {wt.weights()[fe[0]], wt.weights()[fe[1]], wt.weights()[fe[2]]});
        for (int k = 0; k < 3; ++k) {
            K[t[k]] -= th[k];
        }
        area += kPi - th[0] - th[1] - th[2];
    }
    return {K, area};
}

/// Central-difference Jacobian of a vector field, column j = d f / d x_j
inline Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double h)
{
    const auto f0 = f(x);
    Eigen::MatrixXd J(f0.size(), x.size());
    for (int j = 0; j < x.size(); ++j) {
        Eigen::VectorXd xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        J.col(j) = (f(xp) - f(xm)) / (2 * h);
    }
    return J;
}

/// Central-difference gradient of a scalar function
inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double h)
{
    Eigen::VectorXd g(x.size());
    for (int j = 0; j < x.size(); ++j) {
        Eigen::VectorXd xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        g[j] = (f(xp) - f(xm)) / (2 * h);
    }
    return g;
}

namespace detail
{

inline double simpson(const std::function<double(double)>& f, double a, double b, double fa,
                      double fm, double fb, double whole, double tol, int depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6 * (fa + 4 * flm + fm);
    const double right = (b - m) / 6 * (fm + 4 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15 * tol) {
        return left + right + (left + right - whole) / 15;
    }
    return simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson on [a, b]
inline double integrate(const std::function<double(double)>& f, double a, double b, double tol)
{
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6 * (fa + 4 * fm + fb);
    return detail::simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

/**
 * Line integral of a one-form along the axis-parallel staircase from x0 to x1:
 * coordinate 0 first, then 1, and so on.
 */
inline double staircase_integral(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& form,
                                 const Eigen::VectorXd& x0, const Eigen::VectorXd& x1, double tol)
{
    Eigen::VectorXd p = x0;
    double total = 0;
    for (int i = 0; i < x0.size(); ++i) {
        if (x1[i] == x0[i]) {
            continue;
        }
        const Eigen::VectorXd base = p;
        auto g = [&](double s) {
            Eigen::VectorXd q = base;
            q[i] = s;
            return form(q)[i];
        };
        total += integrate(g, x0[i], x1[i], tol / x0.size());
        p[i] = x1[i];
    }
    return total;
}

}  // namespace oracle
