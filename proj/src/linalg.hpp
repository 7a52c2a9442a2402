#pragma once

// Dense kernels shared by the restricted solvers. Internal header.

#include <Eigen/Dense>

namespace l0reg::detail {

/// Minimal-norm least-squares solution of A z ~ b.
Eigen::VectorXd min_norm_least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

struct QuadraticSolution {
    Eigen::VectorXd w;
    double stationarity = 0.0; ///< ||2 H w + g||_2
};

/// Minimal-norm minimizer of w^T H w + g^T w for symmetric PSD H.
/// Throws SolverError when the quadratic is unbounded below.
QuadraticSolution minimize_convex_quadratic(const Eigen::MatrixXd& H, const Eigen::VectorXd& g);

/// Smallest eigenvalue of the symmetric part of Q.
double min_symmetric_eigenvalue(const Eigen::MatrixXd& Q);

} // namespace l0reg::detail
