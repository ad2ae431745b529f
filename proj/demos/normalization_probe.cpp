// The literal normalization leaves sum_i omega_i = total area + 2 pi sum beta in
// the hyperbolic main flow, which is positive, so no interior stationary
// point can be reached. Watch the sum along a flow.

#include <cstdio>

#include <alphaflow/alphaflow.hpp>

int main()
{
    using namespace alphaflow;
    const auto wt = builtin("klein_quartic_24");

    FlowSpec flow;
    flow.potential.kind = PotentialKind::main_H;
    flow.potential.alpha = 1.0;
    flow.potential.normalization = Normalization::literal();
    Rng rng(5);
    flow.u0 = random_u(Geometry::hyperbolic, wt.vertex_count(), rng);

    IntegratorConfig ic;
    ic.max_time = 40.0;
    const auto traj = integrate(flow, wt, ic);
    for (std::size_t k = 0; k < traj.records.size(); k += traj.records.size() / 10 + 1) {
        const auto& r = traj.records[k];
        std::printf("  t %7.2f  sum omega %.6f  total area %.6f  min r %.3e\n", r.t, r.omega_sum,
                    r.total_area, r.r.minCoeff());
    }
    const auto probe = literal_normalization_probe(flow, wt, traj);
    std::printf("status %s; sum omega stays in [%.4f, %.4f]; obstructs convergence: %s\n",
                to_string(traj.status).c_str(), probe.min_sum, probe.max_sum,
                probe.obstructs_convergence ? "yes" : "no");

    // Newton fares no better: the area sum only vanishes as the packing collapses
    const auto res = solve(flow.potential, wt, SolveConfig{});
    std::printf("Newton under literal normalization: %s, gradient sum %.3e, min r %.3e\n",
                to_string(res.status).c_str(), res.gradient_sum, res.r.minCoeff());
    return 0;
}
