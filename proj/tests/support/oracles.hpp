#pragma once

// Random instances and independent reference solvers for the test suites.
//
// The reference solvers deliberately avoid the library's null-space route:
// restricted least squares goes through the Lagrange (KKT) system with a
// full-pivot LU, or through column-subset QR when M = I.

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace l0reg::testing {

using Rng = std::mt19937_64;

inline Eigen::MatrixXd random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        m.data()[i] = n(rng);
    }
    return m;
}

inline Eigen::VectorXd random_vector(Rng& rng, Eigen::Index n, double scale = 1.0) {
    return scale * random_matrix(rng, n, 1).col(0);
}

/// Gaussian d x m matrix with smallest singular value at least 0.05 (d <= m).
inline Eigen::MatrixXd random_full_rank(Rng& rng, Eigen::Index d, Eigen::Index m) {
    for (;;) {
        Eigen::MatrixXd M = random_matrix(rng, d, m);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
        if (svd.singularValues().minCoeff() > 0.05) {
            return M;
        }
    }
}

/// Random PSD matrix of the given rank.
inline Eigen::MatrixXd random_psd(Rng& rng, Eigen::Index n, Eigen::Index rank) {
    const Eigen::MatrixXd F = random_matrix(rng, n, rank);
    return F * F.transpose();
}

/// Nonzero indices of x in exact arithmetic.
inline std::size_t exact_nnz(const Eigen::VectorXd& x, double cut = 0.0) {
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        k += std::abs(x[i]) > cut ? 1 : 0;
    }
    return k;
}

/// Bit mask of allowed rows -> list of forbidden rows.
inline std::vector<Eigen::Index> forbidden_rows(std::uint64_t mask, Eigen::Index d) {
    std::vector<Eigen::Index> out;
    for (Eigen::Index i = 0; i < d; ++i) {
        if (!(mask >> i & 1U)) {
            out.push_back(i);
        }
    }
    return out;
}

/// argmin ||A x - b||^2 s.t. (M x)_i = 0 for i in `zero_rows`, via the KKT
/// system [2A'A  F'; F  0] [x; nu] = [2A'b; 0]. Needs A'A positive definite on
/// the feasible subspace and F of full row rank.
inline Eigen::VectorXd kkt_restricted_ls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                         const Eigen::MatrixXd& M, const std::vector<Eigen::Index>& zero_rows) {
    const Eigen::Index m = A.cols();
    const auto k = static_cast<Eigen::Index>(zero_rows.size());
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(m + k, m + k);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + k);
    K.topLeftCorner(m, m) = 2.0 * A.transpose() * A;
    rhs.head(m) = 2.0 * A.transpose() * b;
    for (Eigen::Index r = 0; r < k; ++r) {
        K.block(m + r, 0, 1, m) = M.row(zero_rows[static_cast<std::size_t>(r)]);
        K.block(0, m + r, m, 1) = M.row(zero_rows[static_cast<std::size_t>(r)]).transpose();
    }
    return K.fullPivLu().solve(rhs).head(m);
}

/// Column-subset least squares for M = I: x_S = argmin ||A_S z - b||, rest 0.
inline Eigen::VectorXd subset_ls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, std::uint64_t mask) {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index i = 0; i < A.cols(); ++i) {
        if (mask >> i & 1U) {
            cols.push_back(i);
        }
    }
    Eigen::VectorXd x = Eigen::VectorXd::Zero(A.cols());
    if (cols.empty()) {
        return x;
    }
    Eigen::MatrixXd As(A.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
        As.col(static_cast<Eigen::Index>(c)) = A.col(cols[c]);
    }
    const Eigen::VectorXd z = As.householderQr().solve(b);
    for (std::size_t c = 0; c < cols.size(); ++c) {
        x[cols[c]] = z[static_cast<Eigen::Index>(c)];
    }
    return x;
}

struct OracleOptimum {
    Eigen::VectorXd x;
    double g = std::numeric_limits<double>::infinity();
    double f = std::numeric_limits<double>::infinity();
    std::size_t level = 0;
};

/// min over patterns of size exactly `size` (or all patterns when size < 0)
/// of g, scored by g + lambda * nnz(Mx) with nnz cut at `cut`.
inline OracleOptimum oracle_quadratic(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::MatrixXd& M,
                                      double lambda, int size, double cut = 1e-9) {
    const Eigen::Index d = M.rows();
    OracleOptimum best;
    const bool identity = M.rows() == M.cols() && M.isIdentity();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
        if (size >= 0 && std::popcount(mask) != size) {
            continue;
        }
        const Eigen::VectorXd x = identity ? subset_ls(A, b, mask) : kkt_restricted_ls(A, b, M, forbidden_rows(mask, d));
        const double g = (A * x - b).squaredNorm();
        const Eigen::VectorXd image = M * x;
        const double scale = std::max(1.0, image.cwiseAbs().maxCoeff());
        const std::size_t level = exact_nnz(image, cut * scale);
        const double f = g + lambda * static_cast<double>(level);
        if (f < best.f) {
            best = {x, g, f, level};
        }
    }
    return best;
}

} // namespace l0reg::testing
