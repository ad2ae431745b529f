// Recover a hyperbolic packing from its area curvature R_{H,A}: build the
// target from a known metric, then solve and flow from elsewhere. Small radii
// keep every R_i negative, where the potential is strictly convex.

#include <cstdio>
#include <random>

#include <alphaflow/alphaflow.hpp>

int main()
{
    using namespace alphaflow;
    const auto wt = builtin("klein_quartic_24", 0.3);
    const int n = wt.vertex_count();

    Rng rng(3);
    std::uniform_real_distribution<double> jitter(0.9, 1.1);
    Eigen::VectorXd radii(n);
    for (int i = 0; i < n; ++i) {
        radii[i] = 0.3 * jitter(rng);
    }
    const PackingMetric target{Geometry::hyperbolic, radii};

    PotentialSpec spec;
    spec.kind = PotentialKind::area_H;
    spec.alpha = 2.0;
    spec.rbar = rbar_from_metric(spec.kind, wt, target, spec.alpha, BranchAssignment::none(n));
    std::printf("target R_{H,A} in [%.4f, %.4f]\n", spec.rbar.minCoeff(), spec.rbar.maxCoeff());

    const auto solved = solve_prescribed(spec, wt, SolveConfig{});
    const double solve_err = ((solved.r - target.r).array() / target.r.array()).abs().maxCoeff();
    std::printf("solve: %s, residual %.2e, min Hessian eigenvalue %.4f, max rel error %.2e\n",
                to_string(solved.status).c_str(), solved.residual, solved.certificate, solve_err);

    FlowSpec flow;
    flow.potential = spec;
    flow.u0 = random_u(Geometry::hyperbolic, n, rng);
    const auto traj = integrate(flow, wt, IntegratorConfig{});
    const auto r = traj.final_record().r;
    const double flow_err = ((r - target.r).array() / target.r.array()).abs().maxCoeff();
    std::printf("flow: %s at t = %.2f, max rel error %.2e\n", to_string(traj.status).c_str(),
                traj.final_record().t, flow_err);
    return solved.status == SolveStatus::found && traj.status == FlowStatus::converged ? 0 : 1;
}
