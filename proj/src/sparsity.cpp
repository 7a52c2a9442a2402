#include "l0reg/sparsity.hpp"

#include "l0reg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace l0reg {

double ZeroTolerance::threshold(double max_abs) const {
    return std::max(absolute, relative * max_abs);
}

void ZeroTolerance::validate() const {
    if (!(absolute >= 0.0) || !(relative >= 0.0) || !std::isfinite(absolute) || !std::isfinite(relative)) {
        throw ArgumentError("zero tolerance must be finite and nonnegative");
    }
}

SupportSet::SupportSet(std::vector<Index> indices, Index ambient_dim)
    : indices_(std::move(indices)), ambient_dim_(ambient_dim) {
    if (ambient_dim_ < 0) {
        throw ArgumentError("support ambient dimension must be nonnegative");
    }
    std::sort(indices_.begin(), indices_.end());
    for (std::size_t k = 0; k < indices_.size(); ++k) {
        if (indices_[k] < 0 || indices_[k] >= ambient_dim_) {
            throw ArgumentError("support index " + std::to_string(indices_[k] + 1) + " outside 1.." +
                                std::to_string(ambient_dim_));
        }
        if (k > 0 && indices_[k] == indices_[k - 1]) {
            throw ArgumentError("support index " + std::to_string(indices_[k] + 1) + " repeated");
        }
    }
}

SupportSet SupportSet::full(Index ambient_dim) {
    std::vector<Index> all(static_cast<std::size_t>(ambient_dim));
    for (Index i = 0; i < ambient_dim; ++i) {
        all[static_cast<std::size_t>(i)] = i;
    }
    return SupportSet(std::move(all), ambient_dim);
}

SupportSet SupportSet::from_one_based(const std::vector<Index>& indices, Index ambient_dim) {
    std::vector<Index> zero_based;
    zero_based.reserve(indices.size());
    for (Index i : indices) {
        zero_based.push_back(i - 1);
    }
    return SupportSet(std::move(zero_based), ambient_dim);
}

bool SupportSet::contains(Index i) const {
    return std::binary_search(indices_.begin(), indices_.end(), i);
}

bool SupportSet::is_subset_of(const SupportSet& other) const {
    return std::includes(other.indices_.begin(), other.indices_.end(), indices_.begin(), indices_.end());
}

SupportSet SupportSet::complement() const {
    std::vector<Index> rest;
    for (Index i = 0; i < ambient_dim_; ++i) {
        if (!contains(i)) {
            rest.push_back(i);
        }
    }
    return SupportSet(std::move(rest), ambient_dim_);
}

std::vector<Index> SupportSet::one_based() const {
    std::vector<Index> out;
    out.reserve(indices_.size());
    for (Index i : indices_) {
        out.push_back(i + 1);
    }
    return out;
}

std::string SupportSet::to_string() const {
    std::ostringstream os;
    os << '{';
    for (std::size_t k = 0; k < indices_.size(); ++k) {
        os << (k ? ", " : "") << indices_[k] + 1;
    }
    os << '}';
    return os.str();
}

namespace {

void require_nonempty(const Eigen::VectorXd& x) {
    if (x.size() == 0) {
        throw DimensionError("vector must have dimension at least 1");
    }
}

double cutoff(const Eigen::VectorXd& x, const ZeroTolerance& tol) {
    return tol.threshold(x.cwiseAbs().maxCoeff());
}

// Exact mode counts anything that is not identically zero, so compare with
// "!= 0" rather than "> 0.0" to keep denormals in.
bool is_nonzero(double v, double cut, bool exact) {
    return exact ? v != 0.0 : std::abs(v) > cut;
}

} // namespace

SparsityLevel l0_norm(const Eigen::VectorXd& x, const ZeroTolerance& tol) {
    require_nonempty(x);
    const double cut = cutoff(x, tol);
    const bool exact = tol.is_exact();
    SparsityLevel count = 0;
    for (Index i = 0; i < x.size(); ++i) {
        if (is_nonzero(x[i], cut, exact)) {
            ++count;
        }
    }
    return count;
}

SupportSet support(const Eigen::VectorXd& x, const ZeroTolerance& tol) {
    require_nonempty(x);
    const double cut = cutoff(x, tol);
    const bool exact = tol.is_exact();
    std::vector<Index> idx;
    for (Index i = 0; i < x.size(); ++i) {
        if (is_nonzero(x[i], cut, exact)) {
            idx.push_back(i);
        }
    }
    return SupportSet(std::move(idx), x.size());
}

SparsityLevel classify_level(const Eigen::VectorXd& x, const ZeroTolerance& tol) {
    return l0_norm(x, tol);
}

bool in_omega(const Eigen::VectorXd& x, SparsityLevel level, const ZeroTolerance& tol) {
    require_nonempty(x);
    if (level > static_cast<SparsityLevel>(x.size())) {
        throw ArgumentError("sparsity level " + std::to_string(level) + " exceeds dimension " +
                            std::to_string(x.size()));
    }
    return l0_norm(x, tol) <= level;
}

double sparsity_safety_radius(const Eigen::VectorXd& x, const ZeroTolerance& tol) {
    const SupportSet s = support(x, tol);
    if (s.empty()) {
        throw PreconditionError("safety radius undefined for the zero vector");
    }
    double radius = std::numeric_limits<double>::infinity();
    for (Index i : s.indices()) {
        radius = std::min(radius, std::abs(x[i]));
    }
    return radius;
}

double support_subset_radius(const Eigen::VectorXd& x, double mu, const ZeroTolerance& tol) {
    if (!(mu > 0.0 && mu <= 0.5)) {
        throw ArgumentError("mu must lie in (0, 1/2]");
    }
    const SupportSet s = support(x, tol);
    if (s.empty()) {
        throw ArgumentError("support subset radius undefined for the zero vector");
    }
    return mu * sparsity_safety_radius(x, tol);
}

Eigen::VectorXd restrict_to(const Eigen::VectorXd& x, const SupportSet& keep) {
    if (keep.ambient_dim() != x.size()) {
        throw DimensionError("support dimension does not match vector");
    }
    Eigen::VectorXd out = Eigen::VectorXd::Zero(x.size());
    for (Index i : keep.indices()) {
        out[i] = x[i];
    }
    return out;
}

} // namespace l0reg
