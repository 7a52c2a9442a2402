#include "linalg.hpp"

#include "l0reg/errors.hpp"

#include <algorithm>
#include <cmath>

namespace l0reg::detail {

using Eigen::Index;

Eigen::VectorXd min_norm_least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    if (A.cols() == 0) {
        return Eigen::VectorXd(0);
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
    cod.setThreshold(1e-12);
    return cod.solve(b);
}

QuadraticSolution minimize_convex_quadratic(const Eigen::MatrixXd& H, const Eigen::VectorXd& g) {
    const Index n = H.rows();
    QuadraticSolution out;
    if (n == 0) {
        out.w = Eigen::VectorXd(0);
        return out;
    }
    const Eigen::MatrixXd sym = 0.5 * (H + H.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
    const Eigen::VectorXd& vals = eig.eigenvalues();
    const Eigen::MatrixXd& vecs = eig.eigenvectors();
    const double scale = std::max(vals.cwiseAbs().maxCoeff(), 1.0);
    const double cut = 1e-12 * scale;

    if (vals.minCoeff() < -1e-9 * scale) {
        throw SolverError("quadratic form is not positive semidefinite");
    }

    const Eigen::VectorXd coeffs = vecs.transpose() * g;
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
    double null_part = 0.0;
    for (Index k = 0; k < n; ++k) {
        if (vals[k] > cut) {
            z[k] = -0.5 * coeffs[k] / vals[k];
        } else {
            null_part = std::max(null_part, std::abs(coeffs[k]));
        }
    }
    if (null_part > 1e-9 * (1.0 + g.norm())) {
        throw SolverError("convex quadratic is unbounded below along a flat direction");
    }
    out.w = vecs * z;
    out.stationarity = (2.0 * (sym * out.w) + g).norm();
    return out;
}

double min_symmetric_eigenvalue(const Eigen::MatrixXd& Q) {
    if (Q.size() == 0) {
        return 0.0;
    }
    const Eigen::MatrixXd sym = 0.5 * (Q + Q.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff();
}

} // namespace l0reg::detail
