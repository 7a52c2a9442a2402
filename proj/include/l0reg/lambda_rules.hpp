#pragma once

// Admissible ranges of the regularization parameter lambda.
//
// Each rule computes a handful of restricted minima of g (the witnesses) and
// turns them into a closed interval [lo, hi]: for any lambda inside it the
// global minimizer of f has a prescribed sparsity and a known optimal value.
//
//   max-sparsity      lambda >= g(x_0) - g(x*)                      -> x_0 in B_0
//   level l           g(x') - g(x*) <= lambda
//                       <= min_j (g(x_j) - g(x')) / (l - j)          -> x' in Gamma_l
//   preserve          0 <= lambda <= min_j (g(x_j) - g(x*)) / (l - j) -> x* stays optimal
//
// x* minimizes g globally, x' over Gamma_l, x_j over Gamma_j (over B_j for
// the preserve rule). The coupled variants apply the same rules to
// g(x, y) with x regularized directly.

#include "l0reg/fidelity.hpp"
#include "l0reg/solver.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace l0reg {

struct Witness {
    Point point;
    double value = 0.0;
    SparsityLevel level = 0;
    bool attained = true;
};

struct LambdaInterval {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    bool feasible = true;
    SparsityLevel target_level = 0;
    /// Rule identifier, e.g. "max-sparsity", and the matching theorem tag.
    std::string rule;
    std::string theorem;
    /// Roles: "g_star", "g_prime", "g_0", "g_1", ... ("g_zero_y" for the coupled
    /// x = 0 witness).
    std::map<std::string, Witness> witnesses;

    /// Whether the feasibility test in weighted-average form agrees with lo <= hi.
    bool weighted_average_feasible = true;
    /// Level-one midpoint test g(x') <= (g(x*) + g(x_0)) / 2, when reported.
    std::optional<bool> midpoint_condition;
    /// An upper bound was computed from an unattained infimum.
    bool conservative = false;
    /// Free-form remarks for reports.
    std::vector<std::string> notes;

    bool unbounded_above() const { return std::isinf(hi); }
    bool contains(double lambda) const { return feasible && lambda >= lo && lambda <= hi; }

    /// lo raised by 1e-12 * (1 + |lo|) so that rounding in lo cannot put a
    /// sampled lambda just outside the hypotheses.
    double guarded_lo() const { return lo + 1e-12 * (1.0 + std::abs(lo)); }
};

LambdaInterval lambda_for_max_sparsity(const FidelityModel& model, const Transform& t,
                                       const EnumerationBudget& budget = {}, const SolverSettings& settings = {});

/// Requires 1 <= level <= d; level 0 is lambda_for_max_sparsity.
LambdaInterval lambda_interval_for_level(const FidelityModel& model, const Transform& t, SparsityLevel level,
                                         const EnumerationBudget& budget = {}, const SolverSettings& settings = {});

/// level = 1, plus the midpoint condition.
LambdaInterval lambda_interval_level_one(const FidelityModel& model, const Transform& t,
                                         const EnumerationBudget& budget = {}, const SolverSettings& settings = {});

/// Range of lambda keeping the global minimizer of g optimal for f.
LambdaInterval lambda_preserving_global_min(const FidelityModel& model, const Transform& t,
                                            const EnumerationBudget& budget = {},
                                            const SolverSettings& settings = {});

/// Coupled models only (x regularized directly, y free).
LambdaInterval coupled_lambda_for_max_sparsity(const FidelityModel& model, const EnumerationBudget& budget = {},
                                               const SolverSettings& settings = {});

LambdaInterval coupled_lambda_interval_for_level(const FidelityModel& model, SparsityLevel level,
                                                 const EnumerationBudget& budget = {},
                                                 const SolverSettings& settings = {});

/// The value of min f that the interval's rule predicts for a lambda inside it.
double predicted_minimum(const LambdaInterval& interval, double lambda);

} // namespace l0reg
