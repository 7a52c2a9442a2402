#pragma once

// Exact minimization of g over support patterns and the exhaustive global
// minimizer of f built on it.
//
// Every point x lies in the pattern set {(Mx)_i = 0, i not in S} of its own
// support S, so minimizing g over each of the 2^d patterns and scoring the
// result by g + lambda * (achieved level) finds the global minimum of f
// exactly. The per-pattern problems are convex for every built-in model
// except the two-dimensional example model, which has a closed form.

#include "l0reg/fidelity.hpp"
#include "l0reg/sparsity.hpp"
#include "l0reg/transform.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace l0reg {

/// Limits on support enumeration. Solves refuse to start past them.
struct EnumerationBudget {
    Index max_dimension = 20;
    std::uint64_t max_patterns = std::uint64_t{1} << 20;
    /// Worker threads for pattern solves; 0 picks the hardware concurrency.
    unsigned parallel_width = 0;
};

struct SolverSettings {
    ZeroTolerance zero_tol{};
    /// Stopping tolerance of the iterative coupled-l1 inner solver.
    double iterative_tol = 1e-9;
    long max_iterations = 100000;
    /// Objective values within tie_rel * (1 + |v|) are treated as ties and
    /// resolved by (lower level, lexicographically smaller support).
    double tie_rel = 1e-12;
};

enum class RequestKind { Support, Gamma, Level, FullSpace };

std::string to_string(RequestKind kind);

struct SolveReport {
    Point minimizer;
    double value_g = 0.0;
    double value_f = 0.0;
    double lambda = 0.0;

    RequestKind request = RequestKind::Support;
    /// Pattern for RequestKind::Support.
    SupportSet requested_support;
    /// Level for Gamma and Level requests.
    SparsityLevel requested_level = 0;

    SparsityLevel achieved_level = 0;
    SupportSet achieved_support;
    /// For Level requests: whether the minimizer sits exactly on the requested
    /// stratum. Otherwise true.
    bool attained = true;
    /// The minimizer came from a black-box restricted minimizer.
    bool claimed = false;

    double solver_tol = 0.0;
    double kkt_residual = 0.0;
    long iterations = 0;
    std::uint64_t patterns_searched = 0;

    /// Other minimizers found with the same objective value (distinct achieved
    /// supports), for global solves.
    std::vector<Point> ties;
};

/// min g over {x : (Mx)_i = 0 for regularized rows i not in S}. For coupled
/// models `t` must be the identity on x and the constraint is x in C_S.
SolveReport minimize_on_support(const FidelityModel& model, const Transform& t, const SupportSet& allowed,
                                const SolverSettings& settings = {});

/// min g over Gamma_level, as the best pattern solve over |S| = level.
SolveReport minimize_on_gamma(const FidelityModel& model, const Transform& t, SparsityLevel level,
                              const EnumerationBudget& budget = {}, const SolverSettings& settings = {});

/// inf g over B_j. When no size-j pattern puts its minimizer exactly on level j,
/// the infimum is not attained and the report says so.
SolveReport minimize_on_level(const FidelityModel& model, const Transform& t, SparsityLevel level,
                              const EnumerationBudget& budget = {}, const SolverSettings& settings = {});

/// Exhaustive global minimizer of f.
SolveReport global_minimize_f(const RegularizedObjective& obj, const EnumerationBudget& budget = {},
                              const SolverSettings& settings = {});

struct ProbeResult {
    bool passed = true;
    std::size_t samples = 0;
    double radius = 0.0;
    /// min over samples of f(point + delta) - f(point).
    double worst_margin = 0.0;
    std::optional<Point> counterexample;

    explicit operator bool() const { return passed; }
};

/// Sampled necessary check for local minimality: f(point) <= f(point + delta) + slack
/// for `samples` perturbations in the ball of `radius`. Half are uniform in the
/// full ball; the other half lie inside the point's own pattern subspace, the
/// lower-dimensional set a full-dimensional sample never hits, in balls of
/// radius * 4^-j for j cycling over 0..5.
ProbeResult local_min_probe(const RegularizedObjective& obj, const Point& point, double radius, std::size_t samples,
                            std::uint64_t seed, double slack = 1e-9, const ZeroTolerance& tol = {});

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

} // namespace l0reg
