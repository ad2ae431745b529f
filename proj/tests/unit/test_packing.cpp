#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "alphaflow/fixtures.hpp"
#include "alphaflow/linalg.hpp"
#include "alphaflow/packing.hpp"
#include "alphaflow/random.hpp"
#include "oracles.hpp"

using namespace alphaflow;
using std::numbers::pi;

namespace
{

PackingMetric random_metric(Geometry g, int n, Rng& rng)
{
    return {g, random_radii(g, n, rng)};
}

BranchAssignment zeros(int n)
{
    return BranchAssignment::none(n);
}

}  // namespace

TEST(Coordinates, Examples)
{
    const PackingMetric one{Geometry::euclidean, Eigen::VectorXd::Ones(3)};
    EXPECT_EQ(to_u(one).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_THROW((void)from_u(Geometry::hyperbolic, Eigen::VectorXd::Zero(2)), DomainError);

    Rng rng(1);
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::VectorXd u = random_u(Geometry::hyperbolic, 10, rng);
        const auto m = from_u(Geometry::hyperbolic, u);
        for (int i = 0; i < 10; ++i) {
            EXPECT_NEAR(m.r[i], 2 * std::atanh(std::exp(u[i])), 1e-15 * m.r[i]);
        }
        const auto back = to_u(m);
        EXPECT_LT(((back - u).array() / u.array()).abs().maxCoeff(), 1e-14);
    }
    EXPECT_THROW(PackingMetric(Geometry::euclidean, Eigen::VectorXd::Zero(2)), DomainError);
}

TEST(AlphaCurvature, AlphaZeroIsShiftedCurvature)
{
    Rng rng(2);
    const auto wt = builtin("icosahedron", 0.3);
    BranchAssignment beta = zeros(12);
    beta.orders[3] = 2;
    for (auto g : {Geometry::euclidean, Geometry::hyperbolic}) {
        const auto m = random_metric(g, 12, rng);
        const auto B = alpha_curvature(wt, m, 0.0, beta);
        Eigen::VectorXd expect = curvature(wt, g, m.r);
        expect[3] += 4 * pi;
        EXPECT_EQ((B - expect).cwiseAbs().maxCoeff(), 0.0);
    }
}

TEST(AlphaCurvature, SymmetricFixtures)
{
    const auto torus = builtin("moebius_torus_7");
    for (double alpha : {0.0, 0.5, 3.0}) {
        const auto B = alpha_curvature(torus, PackingMetric::uniform(Geometry::euclidean, 7, 0.8),
                                       alpha, zeros(7));
        EXPECT_LT(B.cwiseAbs().maxCoeff(), 1e-14);
    }
    const auto klein = builtin("klein_quartic_24");
    const auto B = alpha_curvature(klein, PackingMetric::uniform(Geometry::euclidean, 24, 1.0), 2.0,
                                   zeros(24));
    for (int i = 0; i < 24; ++i) {
        EXPECT_NEAR(B[i], -pi / 3, 1e-14);
    }
}

TEST(Normalization, Examples)
{
    const auto torus = builtin("moebius_torus_7");
    const auto mt = PackingMetric::uniform(Geometry::euclidean, 7, 1.3);
    EXPECT_EQ(normalization(Normalization::literal(), torus, mt, 1.0, zeros(7)), 0.0);

    const auto klein = builtin("klein_quartic_24");
    Rng rng(3);
    const auto mk = random_metric(Geometry::euclidean, 24, rng);
    EXPECT_NEAR(normalization(Normalization::literal(), klein, mk, 0.0, zeros(24)), -pi / 3, 1e-15);
    BranchAssignment beta = zeros(24);
    beta.orders[0] = 1;
    beta.orders[9] = 1;
    EXPECT_NEAR(normalization(Normalization::branched(), klein, mk, 0.0, beta), -pi / 6, 1e-15);
    EXPECT_EQ(normalization(Normalization::explicit_s(-0.25), klein, mk, 2.0, beta), -0.25);
}

TEST(Normalization, ParseAndPrint)
{
    EXPECT_EQ(Normalization::parse("literal").str(), "literal");
    EXPECT_EQ(Normalization::parse("branched").str(), "branched");
    const auto e = Normalization::parse("explicit=-1.5");
    EXPECT_TRUE(e.is_explicit());
    EXPECT_EQ(e.value, -1.5);
    EXPECT_EQ(e.str(), "explicit=-1.5");
    EXPECT_THROW((void)Normalization::parse("explicit=abc"), DomainError);
    EXPECT_THROW((void)Normalization::parse("average"), DomainError);
    EXPECT_THROW((void)Normalization::explicit_s(INFINITY), DomainError);
}

TEST(AreaCurvature, Elements)
{
    const auto oct = builtin("octahedron");
    const auto e = area_curvature(oct, PackingMetric::uniform(Geometry::euclidean, 6, 1.0), 2.0,
                                  zeros(6));
    for (int i = 0; i < 6; ++i) {
        EXPECT_NEAR(e.A[i], pi, 1e-15);
    }
    Rng rng(4);
    const auto klein = builtin("klein_quartic_24");
    const auto m = random_metric(Geometry::hyperbolic, 24, rng);
    const auto h = area_curvature(klein, m, 2.0, zeros(24));
    for (int i = 0; i < 24; ++i) {
        // hyperbolic disk of radius r has area 2 pi (cosh r - 1) = 4 pi sinh^2(r/2)
        EXPECT_NEAR(h.A[i], 2 * pi * (std::cosh(m.r[i]) - 1), 1e-13);
    }
}

TEST(AreaCurvature, ConsistentWithAlphaCurvature)
{
    Rng rng(5);
    const auto wt = builtin("icosahedron", 0.7);
    BranchAssignment beta = zeros(12);
    beta.orders[0] = 1;
    for (auto g : {Geometry::euclidean, Geometry::hyperbolic}) {
        for (double alpha : {0.0, 1.0, 2.5}) {
            const auto m = random_metric(g, 12, rng);
            const auto cf = curvature_field(wt, m, alpha, beta, Normalization::branched());
            const Eigen::VectorXd lhs = (cf.R_area.array() * cf.A.array()).matrix();
            const Eigen::VectorXd rhs = (cf.B.array() * alpha_weights(m, alpha).array()).matrix();
            EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
        }
    }
}

TEST(Jacobian, EuclideanKernelRankAndSigns)
{
    Rng rng(6);
    for (const auto& name : builtin_names()) {
        const auto wt = builtin(name, 0.2);
        const int n = wt.vertex_count();
        for (int trial = 0; trial < 10; ++trial) {
            const auto m = random_metric(Geometry::euclidean, n, rng);
            const auto cj = curvature_jacobian(wt, m);
            EXPECT_LT(cj.symmetry_defect(), 1e-10);
            EXPECT_LT((cj.J * Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff(), 1e-9);
            EXPECT_LT(cj.S.cwiseAbs().maxCoeff(), 1e-9);
            const auto ev = symmetric_eigenvalues(cj.J);
            EXPECT_GT(ev[0], -1e-8);
            EXPECT_LT(std::abs(ev[0]), 1e-8);
            EXPECT_GT(ev[1], 1e-8);
            for (int i = 0; i < n; ++i) {
                EXPECT_GT(cj.J(i, i), 0.0);
                for (int j = 0; j < n; ++j) {
                    if (i == j) {
                        continue;
                    }
                    if (wt.adjacent(i, j)) {
                        EXPECT_LT(cj.J(i, j), 0.0);
                        EXPECT_NEAR(cj.C(i, j), cj.C(j, i), 1e-12);
                    }
                    else {
                        EXPECT_LT(std::abs(cj.J(i, j)), 1e-12);
                    }
                }
            }
        }
    }
}

TEST(Jacobian, HyperbolicPositiveDefinite)
{
    Rng rng(7);
    for (const auto& name : builtin_names()) {
        const auto wt = builtin(name, 0.5);
        for (int trial = 0; trial < 10; ++trial) {
            const auto m = random_metric(Geometry::hyperbolic, wt.vertex_count(), rng);
            const auto cj = curvature_jacobian(wt, m);
            EXPECT_GT(min_eigenvalue(cj.J), 0.0);
            EXPECT_GT(cj.S.minCoeff(), 0.0);
        }
    }
}

TEST(Jacobian, AnalyticMatchesDifferences)
{
    Rng rng(8);
    const auto wt = builtin("moebius_torus_7", 0.6);
    for (auto g : {Geometry::euclidean, Geometry::hyperbolic}) {
        const bool hyp = g == Geometry::hyperbolic;
        for (int trial = 0; trial < 5; ++trial) {
            const auto m = random_metric(g, 7, rng);
            const auto cj = curvature_jacobian(wt, m);
            const auto fd = curvature_jacobian(wt, m, DerivativeMode::finite_difference);
            EXPECT_LT((cj.J - fd.J).cwiseAbs().maxCoeff(), 1e-6);

            // oracle: long-double curvature differenced in u
            const Eigen::VectorXd u = to_u(m);
            auto K = [&](const Eigen::VectorXd& x) {
                Eigen::VectorXd r(x.size());
                for (int i = 0; i < x.size(); ++i) {
                    r[i] = static_cast<double>(oracle::radius(hyp, x[i]));
                }
                const auto ref = oracle::curvature(wt, hyp, r).first;
                Eigen::VectorXd out(x.size());
                for (int i = 0; i < x.size(); ++i) {
                    out[i] = static_cast<double>(ref[i]);
                }
                return out;
            };
            const auto J_ref = oracle::fd_jacobian(K, u, 1e-6);
            EXPECT_LT((cj.J - J_ref).cwiseAbs().maxCoeff(), 1e-6);
        }
    }
}

TEST(GradientSum, Identities)
{
    Rng rng(9);
    const auto klein = builtin("klein_quartic_24", 0.3);
    for (int trial = 0; trial < 10; ++trial) {
        const auto m = random_metric(Geometry::euclidean, 24, rng);
        EXPECT_NEAR(gradient_sum_residual(klein, m, 1.5, zeros(24), Normalization::literal()), 0.0,
                    1e-9);
        BranchAssignment beta = zeros(24);
        beta.orders[1] = 2;
        beta.orders[7] = 1;
        EXPECT_NEAR(gradient_sum_residual(klein, m, 1.5, beta, Normalization::literal()), 6 * pi,
                    1e-9);
        EXPECT_NEAR(gradient_sum_residual(klein, m, 1.5, beta, Normalization::branched()), 0.0,
                    1e-9);

        const auto mh = random_metric(Geometry::hyperbolic, 24, rng);
        const double area = curvature_detail(klein, Geometry::hyperbolic, mh.r).total_area;
        const double res = gradient_sum_residual(klein, mh, 2.0, zeros(24), Normalization::literal());
        EXPECT_NEAR(res, area, 1e-9);
        EXPECT_GT(res, 0.0);
    }
}

TEST(Scaling, EuclideanInvariance)
{
    Rng rng(10);
    const auto wt = builtin("klein_quartic_24", 0.1);
    for (int trial = 0; trial < 10; ++trial) {
        const auto m = random_metric(Geometry::euclidean, 24, rng);
        for (double alpha : {0.0, 0.7, 2.0}) {
            const auto cf = curvature_field(wt, m, alpha, zeros(24), Normalization::literal());
            const Eigen::VectorXd sw = cf.s_alpha * alpha_weights(m, alpha);
            for (double c : {0.5, 2.0, 10.0}) {
                const PackingMetric mc{Geometry::euclidean, c * m.r};
                const auto cfc = curvature_field(wt, mc, alpha, zeros(24), Normalization::literal());
                EXPECT_LT((cfc.B * std::pow(c, alpha) - cf.B).cwiseAbs().maxCoeff(), 1e-10);
                const Eigen::VectorXd swc = cfc.s_alpha * alpha_weights(mc, alpha);
                EXPECT_LT((swc - sw).cwiseAbs().maxCoeff(), 1e-10);
            }
        }
    }
}

TEST(Basis, MeanZeroIsOrthonormal)
{
    const auto Q = mean_zero_basis(7);
    EXPECT_LT((Q.transpose() * Q - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((Eigen::RowVectorXd::Ones(7) * Q).cwiseAbs().maxCoeff(), 1e-14);
}
