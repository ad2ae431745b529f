#pragma once

// Shared builders for seeded test instances.

#include <random>

#include "alphaflow/fixtures.hpp"
#include "alphaflow/potential.hpp"
#include "alphaflow/random.hpp"

namespace instances
{

using namespace alphaflow;

/// radii r0 (1 + 0.1 eps_i), eps_i uniform in [-1, 1]
inline PackingMetric perturbed_uniform(Geometry g, int n, double r0, Rng& rng)
{
    std::uniform_real_distribution<double> eps(-1.0, 1.0);
    Eigen::VectorXd r(n);
    for (int i = 0; i < n; ++i) {
        r[i] = r0 * (1.0 + 0.1 * eps(rng));
    }
    return {g, r};
}

/// A radius scale at which the Klein quartic has negative curvature everywhere
inline double negative_curvature_radius(Geometry g)
{
    return g == Geometry::euclidean ? 1.0 : 0.3;
}

/// Spec for a kind on a triangulation; prescribed/area kinds get rbar from a perturbed metric
inline PotentialSpec make_spec(PotentialKind kind, const WeightedTriangulation& wt, double alpha,
                               Rng& rng, PackingMetric* target = nullptr)
{
    PotentialSpec spec;
    spec.kind = kind;
    spec.alpha = alpha;
    spec.beta = BranchAssignment::none(wt.vertex_count());
    spec.normalization = Normalization::literal();
    if (uses_rbar(kind)) {
        const Geometry g = geometry_of(kind);
        const auto m = perturbed_uniform(g, wt.vertex_count(), negative_curvature_radius(g), rng);
        spec.rbar = rbar_from_metric(kind, wt, m, alpha, spec.beta);
        if (target != nullptr) {
            *target = m;
        }
    }
    return spec;
}

}  // namespace instances
