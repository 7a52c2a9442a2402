#pragma once

// The analysis operator M (d x m) whose image is measured for sparsity.
//
// Points x in R^m are sorted into the strata B_j = {x : ||Mx||_0 = j}; the
// cumulative unions Gamma_l = B_0 u ... u B_l are the sets the restricted
// solvers minimize over. The partition is only guaranteed for surjective M
// (rank d), so rank-deficient operators are accepted solely in diagonal form,
// where rows with a zero diagonal entry never count toward the level.

#include "l0reg/sparsity.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace l0reg {

class Transform {
public:
    static constexpr double kDefaultRankTol = 1e-10;

    /// Computes the SVD, numerical rank and spectral norm of `matrix`.
    /// Throws ArgumentError on an empty or non-finite matrix.
    explicit Transform(Eigen::MatrixXd matrix, double rank_tol = kDefaultRankTol);

    /// M = I_d.
    static Transform identity(Index d);

    const Eigen::MatrixXd& matrix() const { return matrix_; }
    Index rows() const { return matrix_.rows(); }
    Index cols() const { return matrix_.cols(); }

    const Eigen::VectorXd& singular_values() const { return singular_values_; }
    const Eigen::MatrixXd& left_factor() const { return left_; }
    const Eigen::MatrixXd& right_factor() const { return right_; }
    Index rank() const { return rank_; }
    double spectral_norm() const { return singular_values_.size() ? singular_values_[0] : 0.0; }
    double rank_tol() const { return rank_tol_; }

    bool full_rank() const { return rank_ == rows(); }
    bool is_identity() const { return identity_; }
    bool is_diagonal() const { return diagonal_; }

    /// Full rank, or diagonal with at least one nonzero entry.
    bool supports_partition() const { return full_rank() || (diagonal_ && rank_ > 0); }

    /// Rows of Mx that can be nonzero and therefore count toward the level.
    /// All rows for full-rank M; the rows with a nonzero diagonal entry in
    /// diagonal mode.
    const std::vector<Index>& regularized_rows() const { return regularized_rows_; }

    /// Largest attainable level, |regularized_rows()|.
    SparsityLevel max_level() const { return regularized_rows_.size(); }

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const;

    /// Orthonormal basis (m x k) of {x : (Mx)_i = 0 for every regularized
    /// row i outside `allowed`}. Coordinate vectors are used for diagonal M
    /// so that off-support components come out exactly zero.
    Eigen::MatrixXd restricted_basis(const SupportSet& allowed) const;

    /// Throws UnsupportedError unless supports_partition().
    void require_partition() const;

private:
    Eigen::MatrixXd matrix_;
    Eigen::VectorXd singular_values_;
    Eigen::MatrixXd left_;
    Eigen::MatrixXd right_;
    Index rank_ = 0;
    double rank_tol_ = kDefaultRankTol;
    bool identity_ = false;
    bool diagonal_ = false;
    std::vector<Index> regularized_rows_;
};

/// j with x in B_j, i.e. the level of Mx.
SparsityLevel classify_preimage(const Eigen::VectorXd& x, const Transform& t, const ZeroTolerance& tol = {});

/// x in Gamma_l, i.e. ||Mx||_0 <= level.
bool in_gamma(const Eigen::VectorXd& x, SparsityLevel level, const Transform& t, const ZeroTolerance& tol = {});

/// min_i |(Mx)_i| / ||M||. Requires x in B_d; every x' closer than this
/// stays in B_d.
double bd_openness_radius(const Eigen::VectorXd& x, const Transform& t, const ZeroTolerance& tol = {});

/// M = U * Lambda * V^T with Lambda stored as a diagonal Transform.
struct ReducedTransform {
    Transform diagonal;
    Eigen::MatrixXd left;  ///< U, d x d
    Eigen::MatrixXd right; ///< V, m x m
};

/// Change of variables z = V^T x that exposes the singular values. Solvers
/// working on the result regularize only the first rank() components of
/// Lambda z. Throws PreconditionError for the zero matrix.
ReducedTransform svd_reduce(const Transform& t);

/// Moore-Penrose solution of M x = y.
Eigen::VectorXd pseudo_inverse_apply(const Transform& t, const Eigen::VectorXd& y);

} // namespace l0reg
