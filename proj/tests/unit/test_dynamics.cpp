#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "alphaflow/dynamics.hpp"
#include "alphaflow/linalg.hpp"
#include "instances.hpp"

using namespace alphaflow;
using std::numbers::pi;

namespace
{

const WeightedTriangulation& klein()
{
    static const auto wt = builtin("klein_quartic_24", 0.2);
    return wt;
}

FlowSpec main_flow(PotentialKind kind, double alpha, const Eigen::VectorXd& u0)
{
    FlowSpec f;
    f.potential.kind = kind;
    f.potential.alpha = alpha;
    f.potential.normalization = Normalization::literal();
    f.u0 = u0;
    return f;
}

void expect_time_increasing(const Trajectory& tr)
{
    for (std::size_t k = 1; k < tr.records.size(); ++k) {
        ASSERT_GT(tr.records[k].t, tr.records[k - 1].t);
    }
}

void expect_potential_descent(const Trajectory& tr)
{
    for (std::size_t k = 1; k < tr.records.size(); ++k) {
        ASSERT_LE(tr.records[k].potential, tr.records[k - 1].potential + 1e-9) << "record " << k;
    }
}

}  // namespace

TEST(FlowField, StationaryExamples)
{
    const auto torus = builtin("moebius_torus_7");
    EXPECT_LT(flow_field(main_flow(PotentialKind::main_E, 1.0, Eigen::VectorXd::Zero(7)), torus,
                         Eigen::VectorXd::Constant(7, 0.2))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-14);
    for (double alpha : {0.0, 1.0, 2.5}) {
        const auto f = main_flow(PotentialKind::main_E, alpha, Eigen::VectorXd::Zero(24));
        EXPECT_LT(flow_field(f, klein(), Eigen::VectorXd::Constant(24, 0.4)).cwiseAbs().maxCoeff(),
                  1e-13);
    }
}

TEST(FlowField, NegativeOneFormForGradientKinds)
{
    Rng rng(1);
    for (auto kind : {PotentialKind::main_E, PotentialKind::main_H, PotentialKind::prescribed_E,
                      PotentialKind::prescribed_tanh_H}) {
        FlowSpec f;
        f.potential = instances::make_spec(kind, klein(), 1.3, rng);
        const Eigen::VectorXd u = random_u(f.geometry(), 24, rng);
        f.u0 = u;
        EXPECT_LT((flow_field(f, klein(), u) + one_form(f.potential, klein(), u)).cwiseAbs().maxCoeff(),
                  1e-12);
    }
}

TEST(FlowField, AreaKindsUseAreaCurvature)
{
    Rng rng(2);
    for (auto kind : {PotentialKind::area_E, PotentialKind::area_H}) {
        FlowSpec f;
        f.potential = instances::make_spec(kind, klein(), 1.0, rng);
        const Eigen::VectorXd u = random_u(f.geometry(), 24, rng);
        f.u0 = u;
        const auto m = from_u(f.geometry(), u);
        const Eigen::VectorXd R =
            area_curvature(klein(), m, 1.0, effective_beta(f.potential, klein())).R_area;
        EXPECT_LT((flow_field(f, klein(), u) - (f.potential.rbar - R)).cwiseAbs().maxCoeff(), 1e-12);
        f.gamma = Eigen::VectorXd::Constant(24, 3.0);
        EXPECT_LT((flow_field(f, klein(), u) - 3.0 * (f.potential.rbar - R)).cwiseAbs().maxCoeff(),
                  1e-11);
    }
}

TEST(FlowSpecChecks, RejectsInconsistentInput)
{
    const auto torus = builtin("moebius_torus_7");
    EXPECT_THROW(validate_flow(main_flow(PotentialKind::main_H, 1.0, Eigen::VectorXd::Constant(7, -1)),
                               torus),
                 DomainError);
    EXPECT_THROW(validate_flow(main_flow(PotentialKind::main_E, 1.0, Eigen::VectorXd::Zero(5)), torus),
                 DomainError);
    auto f = main_flow(PotentialKind::main_E, 1.0, Eigen::VectorXd::Zero(7));
    f.gamma = Eigen::VectorXd::Ones(7);
    EXPECT_THROW(validate_flow(f, torus), DomainError);
    f = main_flow(PotentialKind::main_E, -0.5, Eigen::VectorXd::Zero(7));
    EXPECT_THROW(validate_flow(f, torus), DomainError);

    Rng rng(3);
    FlowSpec p;
    p.potential = instances::make_spec(PotentialKind::prescribed_E, klein(), 1.0, rng);
    p.u0 = Eigen::VectorXd::Zero(24);
    EXPECT_TRUE(flow_warnings(p).empty());
    p.potential.rbar[0] = 0.5;
    EXPECT_EQ(flow_warnings(p).size(), 1u);
    p.gamma = Eigen::VectorXd::Ones(24);
    EXPECT_THROW(validate_flow(p, klein()), DomainError);

    IntegratorConfig bad;
    bad.abs_tol = 0.0;
    EXPECT_THROW((void)integrate(main_flow(PotentialKind::main_E, 1.0, Eigen::VectorXd::Zero(7)),
                                 torus, bad),
                 DomainError);
}

TEST(Integrate, StationaryStartConvergesAtTimeZero)
{
    const auto torus = builtin("moebius_torus_7");
    const auto tr = integrate(main_flow(PotentialKind::main_E, 1.0, Eigen::VectorXd::Zero(7)), torus);
    EXPECT_EQ(tr.status, FlowStatus::converged);
    ASSERT_EQ(tr.records.size(), 1u);
    EXPECT_EQ(tr.records[0].t, 0.0);
    EXPECT_THROW((void)estimate_rate(tr), ConvergenceError);

    const auto rep =
        diagnostics(main_flow(PotentialKind::main_E, 1.0, Eigen::VectorXd::Zero(7)), torus, tr);
    EXPECT_LT(std::abs(rep.samples[0].G_max), 1e-14);
    EXPECT_LT(std::abs(rep.samples[0].G_min), 1e-14);
}

TEST(Integrate, MainEuclideanConvergesExponentially)
{
    Rng rng(4);
    for (double alpha : {0.0, 1.0, 2.0}) {
        const auto f = main_flow(PotentialKind::main_E, alpha,
                                 project_mean_zero(random_u(Geometry::euclidean, 24, rng)));
        const auto tr = integrate(f, klein());
        ASSERT_EQ(tr.status, FlowStatus::converged) << tr.message;
        expect_time_increasing(tr);
        expect_potential_descent(tr);

        const auto& last = tr.final_record();
        EXPECT_LT((last.B.array() - last.s_alpha).abs().maxCoeff(), 1e-8);
        // sum of u is conserved when sum(omega) = 0
        EXPECT_LT(std::abs(last.u.sum() - f.u0.sum()), 1e-8);

        const auto rate = estimate_rate(tr);
        EXPECT_LT(rate.lambda, 0.0);
        EXPECT_GT(rate.r_squared, 0.99);

        const auto rep = diagnostics(f, klein(), tr);
        ASSERT_TRUE(rep.envelope_checked);
        EXPECT_GE(rep.min_envelope_margin, 0.0);
        EXPECT_LT(rep.max_curvature_identity_residual, 1e-8);
        EXPECT_LT(rep.max_omega_identity_residual, 1e-8);
        EXPECT_TRUE(rep.G_ordered);
    }
}

TEST(Integrate, BranchedEqualsLiteralWithoutBranching)
{
    Rng rng(5);
    auto f = main_flow(PotentialKind::main_E, 1.0, random_u(Geometry::euclidean, 24, rng));
    IntegratorConfig cfg;
    cfg.max_time = 5.0;
    const auto a = integrate(f, klein(), cfg);
    f.potential.normalization = Normalization::branched();
    const auto b = integrate(f, klein(), cfg);
    ASSERT_EQ(a.records.size(), b.records.size());
    EXPECT_EQ((a.final_record().u - b.final_record().u).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Integrate, PrescribedRoundTrip)
{
    Rng rng(6);
    for (auto kind : {PotentialKind::prescribed_E, PotentialKind::prescribed_tanh_H,
                      PotentialKind::area_E, PotentialKind::area_H}) {
        PackingMetric target;
        FlowSpec f;
        f.potential = instances::make_spec(kind, klein(), 2.0, rng, &target);
        f.u0 = random_u(f.geometry(), 24, rng);
        const auto tr = integrate(f, klein());
        ASSERT_EQ(tr.status, FlowStatus::converged) << to_string(kind) << ": " << tr.message;
        const auto r = tr.final_record().r;
        EXPECT_LT(((r - target.r).array() / target.r.array()).abs().maxCoeff(), 1e-6)
            << to_string(kind);
        if (!is_area_kind(kind)) {
            expect_potential_descent(tr);
            const auto rate = estimate_rate(tr);
            EXPECT_LT(rate.lambda, 0.0);
            EXPECT_GT(rate.r_squared, 0.99);
        }
    }
}

TEST(Integrate, ScalingShiftsTrajectoryByLogFactor)
{
    Rng rng(7);
    const Eigen::VectorXd u0 = random_u(Geometry::euclidean, 24, rng);
    IntegratorConfig cfg;
    cfg.method = IntegrationMethod::rk4_fixed;
    cfg.step = 0.05;
    cfg.max_time = 20.0;
    cfg.track_potential = false;
    for (double alpha : {0.0, 1.5}) {
        const auto a = integrate(main_flow(PotentialKind::main_E, alpha, u0), klein(), cfg);
        const auto b = integrate(
            main_flow(PotentialKind::main_E, alpha, (u0.array() + std::log(2.0)).matrix()), klein(),
            cfg);
        const std::size_t n = std::min(a.records.size(), b.records.size());
        ASSERT_GT(n, 100u);
        for (std::size_t k = 0; k < n; ++k) {
            ASSERT_EQ(a.records[k].t, b.records[k].t);
            const Eigen::VectorXd d = b.records[k].u - a.records[k].u;
            ASSERT_LT((d.array() - std::log(2.0)).abs().maxCoeff(), 1e-9) << "record " << k;
        }
    }
}

TEST(Integrate, AdaptiveAndFixedStepAgree)
{
    Rng rng(8);
    const auto f = main_flow(PotentialKind::main_E, 1.0, random_u(Geometry::euclidean, 24, rng));
    const auto adaptive = integrate(f, klein());
    ASSERT_EQ(adaptive.status, FlowStatus::converged);
    IntegratorConfig cfg;
    cfg.method = IntegrationMethod::rk4_fixed;
    cfg.step = 0.025;
    cfg.track_potential = false;
    cfg.max_time = adaptive.final_record().t;
    const auto fixed = integrate(f, klein(), cfg);
    EXPECT_LT((adaptive.final_record().u - fixed.final_record().u).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Diagnostics, HyperbolicIdentityWithSelfTerm)
{
    Rng rng(9);
    const auto f = main_flow(PotentialKind::main_H, 1.0, random_u(Geometry::hyperbolic, 24, rng));
    IntegratorConfig cfg;
    cfg.max_time = 3.0;
    cfg.track_potential = false;
    const auto tr = integrate(f, klein(), cfg);
    const auto rep = diagnostics(f, klein(), tr);
    EXPECT_GT(rep.samples.size(), 5u);
    EXPECT_LT(rep.max_curvature_identity_residual, 1e-8);
    EXPECT_LT(rep.max_omega_identity_residual, 1e-8);
    EXPECT_FALSE(rep.envelope_checked);
    EXPECT_TRUE(rep.G_ordered);
    for (const auto& s : rep.samples) {
        EXPECT_GE(s.G_max, 0.0);
        EXPECT_LE(s.G_min, 0.0);
    }
}

TEST(Diagnostics, ExplicitNormalizationIdentity)
{
    Rng rng(10);
    auto f = main_flow(PotentialKind::main_E, 1.5, random_u(Geometry::euclidean, 24, rng));
    f.potential.normalization = Normalization::explicit_s(-0.2);
    IntegratorConfig cfg;
    cfg.max_time = 1.0;
    cfg.track_potential = false;
    const auto tr = integrate(f, klein(), cfg);
    const auto rep = diagnostics(f, klein(), tr);
    EXPECT_LT(rep.max_omega_identity_residual, 1e-8);
    EXPECT_FALSE(rep.envelope_checked);
}

TEST(Probe, EuclideanGradientSum)
{
    Rng rng(11);
    IntegratorConfig cfg;
    cfg.max_time = 20.0;
    for (int total : {0, 2}) {
        auto f = main_flow(PotentialKind::main_E, 1.0, random_u(Geometry::euclidean, 24, rng));
        f.potential.beta = BranchAssignment::none(24);
        if (total > 0) {
            f.potential.beta.orders[0] = 1;
            f.potential.beta.orders[5] = 1;
        }
        const auto tr = integrate(f, klein(), cfg);
        const auto p = literal_normalization_probe(f, klein(), tr);
        EXPECT_LT(std::abs(p.min_sum - 2 * pi * total), 1e-9);
        EXPECT_LT(std::abs(p.max_sum - 2 * pi * total), 1e-9);
        EXPECT_EQ(p.obstructs_convergence, total > 0);
        if (total > 0) {
            EXPECT_NE(tr.status, FlowStatus::converged);
        }
    }
}

TEST(Probe, HyperbolicAreaSumStaysPositive)
{
    Rng rng(12);
    const auto f = main_flow(PotentialKind::main_H, 1.0, random_u(Geometry::hyperbolic, 24, rng));
    IntegratorConfig cfg;
    cfg.max_time = 200.0;
    cfg.track_potential = false;
    const auto tr = integrate(f, klein(), cfg);
    EXPECT_NE(tr.status, FlowStatus::converged);
    const auto p = literal_normalization_probe(f, klein(), tr);
    EXPECT_TRUE(p.strictly_positive);
    EXPECT_TRUE(p.obstructs_convergence);
    EXPECT_LT(p.max_identity_residual, 1e-9);
    EXPECT_LT(p.last_sum, p.first_sum);
    EXPECT_THROW((void)literal_normalization_probe(
                     [&] {
                         FlowSpec q;
                         q.potential = instances::make_spec(PotentialKind::prescribed_E, klein(),
                                                            1.0, rng);
                         return q;
                     }(),
                     klein(), tr),
                 DomainError);
}

TEST(Envelope, Constants)
{
    auto beta = BranchAssignment::none(24);
    beta.orders[3] = 1;
    const auto env = envelope_constants(klein(), beta, Normalization::literal());
    const double c = 2 * pi * 4;
    EXPECT_NEAR(env.a1[0], (2.0 - 7.0) * pi - c, 1e-12);
    EXPECT_NEAR(env.a2[3], 2 * pi + 2 * pi + c, 1e-12);
}

TEST(Integrate, RecordThinningKeepsTerminalStep)
{
    Rng rng(13);
    const auto f = main_flow(PotentialKind::main_E, 1.0, random_u(Geometry::euclidean, 24, rng));
    IntegratorConfig cfg;
    const auto full = integrate(f, klein(), cfg);
    cfg.record_every = 7;
    const auto thin = integrate(f, klein(), cfg);
    EXPECT_EQ(full.steps, thin.steps);
    EXPECT_EQ(thin.records.size(), static_cast<std::size_t>(1 + full.steps / 7 + (full.steps % 7 ? 1 : 0)));
    EXPECT_EQ(thin.final_record().t, full.final_record().t);
    EXPECT_EQ(thin.final_record().potential, full.final_record().potential);
}
