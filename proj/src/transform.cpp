#include "l0reg/transform.hpp"

#include "l0reg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace l0reg {

namespace {

bool off_diagonal_zero(const Eigen::MatrixXd& m) {
    for (Index j = 0; j < m.cols(); ++j) {
        for (Index i = 0; i < m.rows(); ++i) {
            if (i != j && m(i, j) != 0.0) {
                return false;
            }
        }
    }
    return true;
}

} // namespace

Transform::Transform(Eigen::MatrixXd matrix, double rank_tol)
    : matrix_(std::move(matrix)), rank_tol_(rank_tol) {
    if (matrix_.rows() < 1 || matrix_.cols() < 1) {
        throw ArgumentError("transform must have at least one row and one column");
    }
    if (!matrix_.allFinite()) {
        throw ArgumentError("transform has non-finite entries");
    }
    if (!(rank_tol_ >= 0.0)) {
        throw ArgumentError("rank tolerance must be nonnegative");
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix_, Eigen::ComputeFullU | Eigen::ComputeFullV);
    singular_values_ = svd.singularValues();
    left_ = svd.matrixU();
    right_ = svd.matrixV();
    const double cut = rank_tol_ * spectral_norm();
    rank_ = 0;
    for (Index k = 0; k < singular_values_.size(); ++k) {
        if (singular_values_[k] > cut) {
            ++rank_;
        }
    }

    diagonal_ = off_diagonal_zero(matrix_);
    identity_ = matrix_.rows() == matrix_.cols() && matrix_.isIdentity(0.0);

    if (full_rank()) {
        for (Index i = 0; i < rows(); ++i) {
            regularized_rows_.push_back(i);
        }
    } else if (diagonal_) {
        for (Index i = 0; i < std::min(rows(), cols()); ++i) {
            if (std::abs(matrix_(i, i)) > cut) {
                regularized_rows_.push_back(i);
            }
        }
    }
}

Transform Transform::identity(Index d) {
    if (d < 1) {
        throw ArgumentError("identity transform needs d >= 1");
    }
    return Transform(Eigen::MatrixXd::Identity(d, d));
}

Eigen::VectorXd Transform::apply(const Eigen::VectorXd& x) const {
    if (x.size() != cols()) {
        throw DimensionError("point has dimension " + std::to_string(x.size()) + ", transform expects " +
                             std::to_string(cols()));
    }
    if (identity_) {
        return x;
    }
    return matrix_ * x;
}

void Transform::require_partition() const {
    if (!supports_partition()) {
        throw UnsupportedError("transform has rank " + std::to_string(rank_) + " < d = " + std::to_string(rows()) +
                               "; reduce it with svd_reduce and work on the diagonal factor");
    }
}

Eigen::MatrixXd Transform::restricted_basis(const SupportSet& allowed) const {
    require_partition();
    if (allowed.ambient_dim() != rows()) {
        throw DimensionError("support pattern dimension " + std::to_string(allowed.ambient_dim()) +
                             " does not match transform rows " + std::to_string(rows()));
    }
    std::vector<Index> constrained;
    for (Index i : regularized_rows_) {
        if (!allowed.contains(i)) {
            constrained.push_back(i);
        }
    }

    if (diagonal_) {
        std::vector<bool> pinned(static_cast<std::size_t>(cols()), false);
        for (Index i : constrained) {
            pinned[static_cast<std::size_t>(i)] = true;
        }
        const auto free_count = static_cast<Index>(std::count(pinned.begin(), pinned.end(), false));
        Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(cols(), free_count);
        Index k = 0;
        for (Index j = 0; j < cols(); ++j) {
            if (!pinned[static_cast<std::size_t>(j)]) {
                basis(j, k++) = 1.0;
            }
        }
        return basis;
    }

    if (constrained.empty()) {
        return Eigen::MatrixXd::Identity(cols(), cols());
    }
    Eigen::MatrixXd rows_block(static_cast<Index>(constrained.size()), cols());
    for (std::size_t r = 0; r < constrained.size(); ++r) {
        rows_block.row(static_cast<Index>(r)) = matrix_.row(constrained[r]);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows_block, Eigen::ComputeFullV);
    const double cut = rank_tol_ * std::max(spectral_norm(), std::numeric_limits<double>::min());
    Index r = 0;
    for (Index k = 0; k < svd.singularValues().size(); ++k) {
        if (svd.singularValues()[k] > cut) {
            ++r;
        }
    }
    if (r != static_cast<Index>(constrained.size())) {
        throw SolverError("constraint rows of M are numerically dependent");
    }
    return svd.matrixV().rightCols(cols() - r);
}

SparsityLevel classify_preimage(const Eigen::VectorXd& x, const Transform& t, const ZeroTolerance& tol) {
    t.require_partition();
    return l0_norm(t.apply(x), tol);
}

bool in_gamma(const Eigen::VectorXd& x, SparsityLevel level, const Transform& t, const ZeroTolerance& tol) {
    if (level > static_cast<SparsityLevel>(t.rows())) {
        throw ArgumentError("level " + std::to_string(level) + " exceeds d = " + std::to_string(t.rows()));
    }
    return classify_preimage(x, t, tol) <= level;
}

double bd_openness_radius(const Eigen::VectorXd& x, const Transform& t, const ZeroTolerance& tol) {
    const SparsityLevel level = classify_preimage(x, t, tol);
    if (level != static_cast<SparsityLevel>(t.rows())) {
        throw PreconditionError("point lies in B_" + std::to_string(level) + ", not in B_d with d = " +
                                std::to_string(t.rows()));
    }
    return t.apply(x).cwiseAbs().minCoeff() / t.spectral_norm();
}

ReducedTransform svd_reduce(const Transform& t) {
    if (t.rank() == 0) {
        throw PreconditionError("cannot reduce a transform of rank 0");
    }
    Eigen::MatrixXd lambda = Eigen::MatrixXd::Zero(t.rows(), t.cols());
    for (Index k = 0; k < t.singular_values().size(); ++k) {
        lambda(k, k) = k < t.rank() ? t.singular_values()[k] : 0.0;
    }
    return ReducedTransform{Transform(std::move(lambda), t.rank_tol()), t.left_factor(), t.right_factor()};
}

Eigen::VectorXd pseudo_inverse_apply(const Transform& t, const Eigen::VectorXd& y) {
    if (y.size() != t.rows()) {
        throw DimensionError("right-hand side does not match transform rows");
    }
    const double cut = t.rank_tol() * t.spectral_norm();
    Eigen::VectorXd coeffs = t.left_factor().transpose() * y;
    Eigen::VectorXd z = Eigen::VectorXd::Zero(t.cols());
    for (Index k = 0; k < t.singular_values().size(); ++k) {
        if (t.singular_values()[k] > cut) {
            z[k] = coeffs[k] / t.singular_values()[k];
        }
    }
    return t.right_factor() * z;
}

} // namespace l0reg
