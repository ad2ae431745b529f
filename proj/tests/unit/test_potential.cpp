#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "alphaflow/potential.hpp"
#include "instances.hpp"
#include "oracles.hpp"

using namespace alphaflow;
using std::numbers::pi;

namespace
{

const WeightedTriangulation& klein()
{
    static const auto wt = builtin("klein_quartic_24", 0.2);
    return wt;
}

Eigen::VectorXd random_point(PotentialKind k, int n, Rng& rng)
{
    return random_u(geometry_of(k), n, rng);
}

}  // namespace

TEST(OneForm, StationaryExamples)
{
    PotentialSpec spec;
    spec.kind = PotentialKind::main_E;
    const auto torus = builtin("moebius_torus_7");
    for (double alpha : {0.0, 1.0}) {
        spec.alpha = alpha;
        const auto w = one_form(spec, torus, Eigen::VectorXd::Constant(7, 0.3));
        EXPECT_LT(w.cwiseAbs().maxCoeff(), 1e-14);
    }

    Rng rng(1);
    for (auto kind : {PotentialKind::prescribed_E, PotentialKind::prescribed_tanh_H,
                      PotentialKind::area_E, PotentialKind::area_H}) {
        PackingMetric target;
        const auto s = instances::make_spec(kind, klein(), 2.0, rng, &target);
        EXPECT_LT(one_form(s, klein(), to_u(target)).cwiseAbs().maxCoeff(), 1e-13)
            << to_string(kind);
    }
}

TEST(OneForm, DomainAndArguments)
{
    Rng rng(2);
    const auto s = instances::make_spec(PotentialKind::main_H, klein(), 1.0, rng);
    EXPECT_THROW((void)one_form(s, klein(), Eigen::VectorXd::Zero(24)), DomainError);
    EXPECT_THROW((void)one_form(s, klein(), Eigen::VectorXd::Constant(3, -1.0)), DomainError);
    auto p = instances::make_spec(PotentialKind::prescribed_E, klein(), 1.0, rng);
    p.rbar.resize(0);
    EXPECT_THROW((void)one_form(p, klein(), Eigen::VectorXd::Zero(24)), DomainError);
    auto neg = s;
    neg.alpha = -1.0;
    EXPECT_THROW((void)one_form(neg, klein(), Eigen::VectorXd::Constant(24, -1.0)), DomainError);
}

TEST(Potential, ZeroAtBasePoint)
{
    Rng rng(3);
    for (auto kind : all_potential_kinds()) {
        const auto s = instances::make_spec(kind, klein(), 1.0, rng);
        EXPECT_EQ(potential(s, klein(), base_point(s, klein())), 0.0) << to_string(kind);
    }
}

TEST(Potential, GradientMatchesOneForm)
{
    Rng rng(4);
    for (auto kind : all_potential_kinds()) {
        if (!is_closed(kind)) {
            continue;
        }
        const auto s = instances::make_spec(kind, klein(), 1.5, rng);
        const Eigen::VectorXd u = random_point(kind, 24, rng);
        auto F = [&](const Eigen::VectorXd& x) { return potential(s, klein(), x); };
        const auto grad = oracle::fd_gradient(F, u, 1e-5);
        EXPECT_LT((grad - one_form(s, klein(), u)).cwiseAbs().maxCoeff(), 1e-6) << to_string(kind);
    }
}

TEST(Potential, PathIndependenceForClosedKinds)
{
    Rng rng(5);
    const QuadratureConfig quad;
    for (auto kind : all_potential_kinds()) {
        if (!is_closed(kind)) {
            continue;
        }
        const auto s = instances::make_spec(kind, klein(), 2.0, rng);
        const Eigen::VectorXd u = random_point(kind, 24, rng);
        const Eigen::VectorXd base = base_point(s, klein());
        const double straight = potential(s, klein(), u, quad);
        const double stairs = potential_along_path(s, klein(), staircase_path(base, u), quad);
        EXPECT_NEAR(straight, stairs, 2 * quad.tolerance) << to_string(kind);

        // independent staircase by adaptive Simpson
        auto form = [&](const Eigen::VectorXd& x) { return one_form(s, klein(), x); };
        const double ref = oracle::staircase_integral(form, base, u, 1e-12);
        EXPECT_NEAR(straight, ref, 2 * quad.tolerance) << to_string(kind);
    }
}

TEST(Potential, SinhVariantIsPathDependent)
{
    Rng rng(6);
    const auto s = instances::make_spec(PotentialKind::sinh_variant_H, klein(), 2.0, rng);
    const QuadratureConfig quad;
    const Eigen::VectorXd u = random_point(s.kind, 24, rng);
    const Eigen::VectorXd base = base_point(s, klein());
    const double straight = potential(s, klein(), u, quad);
    const double stairs = potential_along_path(s, klein(), staircase_path(base, u), quad);
    EXPECT_GT(std::abs(straight - stairs), 10 * quad.tolerance);
}

TEST(Closedness, Defects)
{
    Rng rng(7);
    const auto me = instances::make_spec(PotentialKind::main_E, klein(), 1.0, rng);
    EXPECT_LT(closedness_defect(me, klein(), random_point(me.kind, 24, rng)), 1e-6);

    auto sv = instances::make_spec(PotentialKind::sinh_variant_H, klein(), 2.0, rng);
    const Eigen::VectorXd u = random_point(sv.kind, 24, rng);
    EXPECT_GT(closedness_defect(sv, klein(), u), 1e-4);
    sv.alpha = 0.0;
    EXPECT_LT(closedness_defect(sv, klein(), u), 1e-6);
}

TEST(Hessian, AlphaZeroMainIsCurvatureJacobian)
{
    Rng rng(8);
    auto s = instances::make_spec(PotentialKind::main_E, klein(), 0.0, rng);
    const Eigen::VectorXd u = random_point(s.kind, 24, rng);
    const auto H = potential_hessian(s, klein(), u);
    const auto J = curvature_jacobian(klein(), from_u(Geometry::euclidean, u)).J;
    EXPECT_EQ((H - J).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_LT((H * Eigen::VectorXd::Ones(24)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Hessian, AnalyticMatchesDifferencesForAllKinds)
{
    Rng rng(9);
    for (auto kind : all_potential_kinds()) {
        for (auto norm : {Normalization::literal(), Normalization::branched(),
                          Normalization::explicit_s(-0.3)}) {
            auto s = instances::make_spec(kind, klein(), 1.7, rng);
            s.normalization = norm;
            s.beta.orders[2] = 1;
            const Eigen::VectorXd u = random_point(kind, 24, rng);
            auto form = [&](const Eigen::VectorXd& x) { return one_form(s, klein(), x); };
            const auto fd = oracle::fd_jacobian(form, u, 1e-6);
            const auto H = potential_hessian(s, klein(), u);
            EXPECT_LT((H - fd).cwiseAbs().maxCoeff(), 1e-5) << to_string(kind) << " " << norm.str();
            if (is_closed(kind)) {
                EXPECT_LT(asymmetry(H), 1e-10);
            }
        }
    }
}

TEST(Convexity, MainHyperbolicPositiveDefinite)
{
    Rng rng(10);
    for (double alpha : {0.0, 0.5, 1.0, 2.0}) {
        const auto s = instances::make_spec(PotentialKind::main_H, klein(), alpha, rng);
        for (int trial = 0; trial < 5; ++trial) {
            EXPECT_GT(min_eigenvalue(potential_hessian(s, klein(), random_point(s.kind, 24, rng))),
                      0.0);
        }
    }
}

TEST(Convexity, RestrictedEuclideanPositiveDefinite)
{
    Rng rng(11);
    for (double alpha : {0.0, 0.5, 1.0, 2.0}) {
        const auto s = instances::make_spec(PotentialKind::main_E, klein(), alpha, rng);
        for (int trial = 0; trial < 5; ++trial) {
            const auto R = restricted_hessian_U(s, klein(), random_point(s.kind, 24, rng));
            EXPECT_EQ(R.rows(), 23);
            EXPECT_GT(min_eigenvalue(R), 0.0);
        }
    }
    const auto torus = builtin("moebius_torus_7", 0.4);
    PotentialSpec t;
    t.kind = PotentialKind::main_E;
    const auto R = restricted_hessian_U(t, torus, random_u(Geometry::euclidean, 7, rng));
    EXPECT_GT(min_eigenvalue(R), 0.0);
    PotentialSpec h;
    h.kind = PotentialKind::main_H;
    EXPECT_THROW((void)restricted_hessian_U(h, torus, Eigen::VectorXd::Constant(7, -1.0)),
                 DomainError);
}

TEST(Convexity, PrescribedAndAreaPositiveDefinite)
{
    Rng rng(12);
    for (auto kind : {PotentialKind::prescribed_E, PotentialKind::prescribed_tanh_H,
                      PotentialKind::area_E, PotentialKind::area_H}) {
        for (double alpha : {0.5, 1.0, 2.0}) {
            const auto s = instances::make_spec(kind, klein(), alpha, rng);
            ASSERT_TRUE(rbar_supports_convexity(s)) << to_string(kind);
            for (int trial = 0; trial < 3; ++trial) {
                const auto H = potential_hessian(s, klein(), random_point(kind, 24, rng));
                EXPECT_GT(min_eigenvalue(H), 0.0) << to_string(kind);
            }
        }
    }
}

TEST(Quadrature, OrdersAndErrors)
{
    Rng rng(13);
    const auto s = instances::make_spec(PotentialKind::main_E, klein(), 1.0, rng);
    const Eigen::VectorXd u = random_point(s.kind, 24, rng);
    const double ref = potential(s, klein(), u);
    for (int order : {7, 10, 15, 20, 25, 30}) {
        QuadratureConfig q;
        q.order = order;
        EXPECT_NEAR(potential(s, klein(), u, q), ref, 2e-10);
    }
    QuadratureConfig bad;
    bad.order = 11;
    EXPECT_THROW((void)potential(s, klein(), u, bad), DomainError);
    bad = {};
    bad.tolerance = 0.0;
    EXPECT_THROW((void)potential(s, klein(), u, bad), DomainError);
}
