#pragma once

#include <array>
#include <cstdint>
#include <numbers>
#include <random>

#include <Eigen/Core>

#include "alphaflow/geometry.hpp"

namespace alphaflow
{

using Rng = std::mt19937_64;

/** @brief Range of random u-coordinates: [-0.5, 0.5] euclidean, [-2, -0.5] hyperbolic */
inline std::pair<double, double> random_u_range(Geometry geom)
{
    return geom == Geometry::euclidean ? std::pair{-0.5, 0.5} : std::pair{-2.0, -0.5};
}

/** @brief Random u-vector drawn uniformly from random_u_range */
inline Eigen::VectorXd random_u(Geometry geom, int n, Rng& rng)
{
    const auto [lo, hi] = random_u_range(geom);
    std::uniform_real_distribution<double> dist(lo, hi);
    Eigen::VectorXd u(n);
    for (int i = 0; i < n; ++i) {
        u[i] = dist(rng);
    }
    return u;
}

/** @brief Radii of a random metric */
inline Eigen::VectorXd random_radii(Geometry geom, int n, Rng& rng)
{
    const Eigen::VectorXd u = random_u(geom, n, rng);
    Eigen::VectorXd r(n);
    for (int i = 0; i < n; ++i) {
        r[i] = u_to_radius(geom, u[i]);
    }
    return r;
}

/** @brief Radii and edge weights of one random triangle, weights uniform in [0, pi/2] */
struct TriangleSample {
    std::array<double, 3> r;
    std::array<double, 3> phi;
};

inline TriangleSample random_triangle(Geometry geom, Rng& rng)
{
    std::uniform_real_distribution<double> w(0.0, std::numbers::pi / 2);
    TriangleSample t{};
    const auto u = random_u(geom, 3, rng);
    for (int k = 0; k < 3; ++k) {
        t.r[k] = u_to_radius(geom, u[k]);
        t.phi[k] = w(rng);
    }
    return t;
}

}  // namespace alphaflow
