#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "alphaflow/errors.hpp"

namespace alphaflow
{

/** @brief max |M - M^T| */
inline double asymmetry(const Eigen::MatrixXd& M)
{
    return (M - M.transpose()).cwiseAbs().maxCoeff();
}

/**
 * @brief Ascending eigenvalues of (M + M^T)/2
 *
 * @throws DomainError if M is not symmetric to tol, scaled by max(1, max|M_ij|)
 */
inline Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& M, double tol = 1e-10)
{
    const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    const double defect = asymmetry(M);
    if (defect > tol * scale) {
        throw DomainError("matrix is not symmetric (defect " + std::to_string(defect) + ")");
    }
    const Eigen::MatrixXd S = 0.5 * (M + M.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

inline double min_eigenvalue(const Eigen::MatrixXd& M, double tol = 1e-10)
{
    return symmetric_eigenvalues(M, tol).minCoeff();
}

/**
 * @brief Orthonormal basis (N x (N-1)) of the hyperplane sum(u) = 0
 *
 * Columns 1..N-1 of the Householder Q that maps e_1 to (1,...,1)/sqrt(N).
 */
inline Eigen::MatrixXd mean_zero_basis(int n)
{
    if (n < 2) {
        throw DomainError("mean-zero hyperplane needs at least two coordinates");
    }
    const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(n, 1);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(ones);
    const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
    return Q.rightCols(n - 1);
}

/** @brief u minus its mean */
inline Eigen::VectorXd project_mean_zero(const Eigen::VectorXd& u)
{
    return (u.array() - u.mean()).matrix();
}

}  // namespace alphaflow
