#pragma once

// Vector-level sparsity: the l0 "norm", supports and the A_l / Omega_l
// partition of R^d by exact nonzero count, plus the perturbation radii
// inside which the nonzero pattern of a vector cannot shrink.

#include <Eigen/Dense>

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace l0reg {

using Index = Eigen::Index;

/// Number of nonzero components; always in [0, d].
using SparsityLevel = std::size_t;

/// Threshold deciding when a floating-point component counts as nonzero.
///
/// A component x_i is nonzero iff |x_i| > max(absolute, relative * ||x||_inf).
/// exact() counts every component that is not identically 0.0.
struct ZeroTolerance {
    double absolute = 1e-10;
    double relative = 1e-12;

    static constexpr ZeroTolerance exact() { return {0.0, 0.0}; }

    bool is_exact() const { return absolute == 0.0 && relative == 0.0; }

    /// Effective cutoff for a vector whose largest magnitude is `max_abs`.
    double threshold(double max_abs) const;

    /// Throws ArgumentError on negative or non-finite fields.
    void validate() const;
};

/// Sorted set of distinct indices into {0, ..., d-1}.
///
/// Stored 0-based; one_based() renders the 1-based form used in reports.
class SupportSet {
public:
    SupportSet() = default;

    /// Throws ArgumentError if an index is out of range or repeated.
    SupportSet(std::vector<Index> indices, Index ambient_dim);
    SupportSet(std::initializer_list<Index> indices, Index ambient_dim)
        : SupportSet(std::vector<Index>(indices), ambient_dim) {}

    static SupportSet full(Index ambient_dim);
    static SupportSet empty(Index ambient_dim) { return SupportSet({}, ambient_dim); }
    static SupportSet from_one_based(const std::vector<Index>& indices, Index ambient_dim);

    const std::vector<Index>& indices() const { return indices_; }
    Index ambient_dim() const { return ambient_dim_; }
    std::size_t size() const { return indices_.size(); }
    bool empty() const { return indices_.empty(); }

    bool contains(Index i) const;
    bool is_subset_of(const SupportSet& other) const;
    SupportSet complement() const;

    std::vector<Index> one_based() const;
    std::string to_string() const;

    friend bool operator==(const SupportSet&, const SupportSet&) = default;
    /// Lexicographic order on the index lists.
    friend bool operator<(const SupportSet& a, const SupportSet& b) { return a.indices_ < b.indices_; }

private:
    std::vector<Index> indices_;
    Index ambient_dim_ = 0;
};

SparsityLevel l0_norm(const Eigen::VectorXd& x, const ZeroTolerance& tol = {});

SupportSet support(const Eigen::VectorXd& x, const ZeroTolerance& tol = {});

/// The unique l with x in A_l. Same value as l0_norm.
SparsityLevel classify_level(const Eigen::VectorXd& x, const ZeroTolerance& tol = {});

/// Membership in Omega_l, the vectors with at most `level` nonzeros.
bool in_omega(const Eigen::VectorXd& x, SparsityLevel level, const ZeroTolerance& tol = {});

/// min |x_i| over the support. Any y with ||y - x||_2 below it keeps at least
/// as many nonzeros as x, and strictly more if it leaves the support cone of x.
double sparsity_safety_radius(const Eigen::VectorXd& x, const ZeroTolerance& tol = {});

/// mu * min |x_i| over the support, for 0 < mu <= 1/2. Every y in the open
/// ball of this radius contains the support of x.
double support_subset_radius(const Eigen::VectorXd& x, double mu, const ZeroTolerance& tol = {});

/// Copy of x with the components outside `keep` set to zero.
Eigen::VectorXd restrict_to(const Eigen::VectorXd& x, const SupportSet& keep);

} // namespace l0reg
