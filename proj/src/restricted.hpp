#pragma once

// Per-variant minimizers of g over a support pattern. Internal header; the
// public entry point is minimize_on_support in solver.hpp.

#include "l0reg/fidelity.hpp"
#include "l0reg/sparsity.hpp"
#include "l0reg/transform.hpp"

namespace l0reg::detail {

struct RestrictedResult {
    Point point;
    double value = 0.0;
    double kkt_residual = 0.0;
    long iterations = 0;
};

struct IterativeOptions {
    double tol = 1e-9;
    long max_iterations = 100000;
};

/// min ||A x - b||^2 over {x : (Mx)_i = 0, i not in S}, via the null-space
/// parametrization x = N z.
RestrictedResult restricted_quadratic(const QuadraticModel& model, const Transform& t, const SupportSet& allowed);

/// Closed form: projection of (1, 1) onto the restricted subspace, compared
/// with the isolated point (0, 1) when it lies in that subspace.
RestrictedResult restricted_paper_example(const Transform& t, const SupportSet& allowed);

/// Joint normal equations in (x_S, y); x is zero off S.
RestrictedResult restricted_coupled_quadratic(const CoupledQuadraticModel& model, const SupportSet& allowed);

/// With x_S = (D y)_S eliminated exactly, the problem is
///   min_y phi(y) + mu * ||E y||_1,   E = rows of D outside S,
/// solved by ADMM on the split z = E y with periodic active-set polishing
/// certified by the subgradient optimality condition.
RestrictedResult restricted_coupled_l1(const CoupledCappedL1Model& model, const SupportSet& allowed,
                                       const IterativeOptions& options);

} // namespace l0reg::detail
