#pragma once

// Executable checks of the necessary conditions and equivalences that global
// and local minimizers of f must satisfy. Local minimality is only ever
// certified by sampling around exact convex restricted solves.

#include "l0reg/fidelity.hpp"
#include "l0reg/solver.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace l0reg {

struct VerificationVerdict {
    /// Claim tag such as "Thm3.5(i)" or "Thm4.8".
    std::string claim;
    bool holds = false;
    /// False when the claim's hypothesis does not hold for the input, in which
    /// case `holds` is vacuously true.
    bool applicable = true;
    /// Point (and its g or f value) certifying or refuting the claim.
    std::optional<Point> witness;
    std::optional<double> witness_value;
    double tolerance_used = 0.0;
    /// Sampling metadata for probe-based verdicts.
    std::size_t samples = 0;
    double radius = 0.0;
    std::vector<std::string> notes;
};

struct VerifyOptions {
    /// Absolute slack on g and f comparisons.
    double tol = 1e-9;
    std::size_t probe_samples = 1000;
    std::uint64_t seed = 0;
};

/// A global minimizer of f on level l must minimize g over Gamma_l.
VerificationVerdict check_necessary_minimizer_of_g_on_gamma(const RegularizedObjective& obj, const Point& x,
                                                            const EnumerationBudget& budget = {},
                                                            const VerifyOptions& options = {});

/// A global minimizer of f is either in Gamma_{d-1} or a global minimizer of g.
VerificationVerdict check_sparsity_dichotomy(const RegularizedObjective& obj, const Point& x,
                                             const EnumerationBudget& budget = {},
                                             const VerifyOptions& options = {});

/// `x` claimed to be a global minimizer of f.
VerificationVerdict check_global_optimality(const RegularizedObjective& obj, const Point& x,
                                           const EnumerationBudget& budget = {},
                                           const VerifyOptions& options = {});

/// For a dense (level d) global minimizer of g: if some x~ on level j has
/// g(x*) + lambda (d - j) > g(x~), then x* is a local but not a global
/// minimizer of f and every global minimizer lies in Gamma_{d-1}.
/// Throws PreconditionError if x is not dense or not a global minimizer of g.
VerificationVerdict check_dense_local_not_global(const RegularizedObjective& obj, const Point& x,
                                                 const EnumerationBudget& budget = {},
                                                 const VerifyOptions& options = {});

/// Outcome of both sides of the local-minimizer equivalence for coupled models.
struct EquivalenceDetail {
    bool restricted_minimizer = false; ///< pair minimizes g over C_I x R^{d'}, I = S(x)
    bool probe_passed = false;         ///< sampled local minimality of f
    double probe_radius = 0.0;
    double support_radius = 0.0;
    double continuity_radius = 0.0;
    double restricted_value = 0.0;
};

/// A pair (x, y) is a local minimizer of f (lambda > 0) iff it minimizes g over
/// C_I x R^{d'} with I = S(x). The restricted side is an exact convex solve, the
/// f side a sampled probe. The verdict holds when both sides agree.
VerificationVerdict check_local_equivalence(const FidelityModel& model, double lambda, const Point& pair,
                                            const VerifyOptions& options, EquivalenceDetail* detail = nullptr);

/// Largest radius (halving from `start`) at which the sampled decrease of g
/// around `p` stays within `limit`.
double estimate_continuity_radius(const FidelityModel& model, const Point& p, double limit, double start,
                                  std::size_t samples, std::uint64_t seed);

/// Claim tags understood by verify(): see the implementation for the list.
std::vector<std::string> verification_claims();

/// Dispatches a claim tag to the matching check.
VerificationVerdict verify(const std::string& claim, const RegularizedObjective& obj, const Point& x,
                           const EnumerationBudget& budget, const VerifyOptions& options);

} // namespace l0reg
