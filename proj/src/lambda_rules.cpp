#include "l0reg/lambda_rules.hpp"

#include "l0reg/errors.hpp"

#include <algorithm>

namespace l0reg {

namespace {

Witness to_witness(const SolveReport& r) {
    return Witness{r.minimizer, r.value_g, r.achieved_level, r.attained};
}

std::string level_role(SparsityLevel j) { return "g_" + std::to_string(j); }

SolveReport global_g(const FidelityModel& model, const Transform& t, const SolverSettings& settings) {
    SolveReport r = minimize_on_support(model, t, SupportSet::full(t.rows()), settings);
    r.request = RequestKind::FullSpace;
    return r;
}

Transform coupled_identity(const FidelityModel& model) {
    if (!is_coupled(model)) {
        throw UnsupportedError("coupled rule requires a coupled model (x, y)");
    }
    return Transform::identity(x_dimension(model));
}

void check_rule_level(const Transform& t, SparsityLevel level) {
    if (level == 0) {
        throw ArgumentError("level 0 is the maximal-sparsity rule; use lambda_for_max_sparsity");
    }
    if (level > static_cast<SparsityLevel>(t.rows())) {
        throw ArgumentError("level " + std::to_string(level) + " exceeds d = " + std::to_string(t.rows()));
    }
}

// Rounding can push a bound that is zero in exact arithmetic slightly below it.
double snap_nonnegative(double v, double reference) {
    if (v < 0.0 && v > -1e-12 * (1.0 + std::abs(reference))) {
        return 0.0;
    }
    return v;
}

LambdaInterval max_sparsity(const FidelityModel& model, const Transform& t, const EnumerationBudget& budget,
                            const SolverSettings& settings) {
    const SolveReport star = global_g(model, t, settings);
    const SolveReport zero = minimize_on_gamma(model, t, 0, budget, settings);

    LambdaInterval out;
    out.target_level = 0;
    out.lo = std::max(0.0, zero.value_g - star.value_g);
    out.hi = std::numeric_limits<double>::infinity();
    out.feasible = true;
    out.witnesses["g_star"] = to_witness(star);
    out.witnesses["g_0"] = to_witness(zero);
    return out;
}

LambdaInterval level_rule(const FidelityModel& model, const Transform& t, SparsityLevel level,
                          const EnumerationBudget& budget, const SolverSettings& settings) {
    check_rule_level(t, level);
    const SolveReport star = global_g(model, t, settings);
    const SolveReport prime = minimize_on_gamma(model, t, level, budget, settings);

    LambdaInterval out;
    out.target_level = level;
    out.witnesses["g_star"] = to_witness(star);
    out.witnesses["g_prime"] = to_witness(prime);

    const double gs = star.value_g;
    const double gp = prime.value_g;
    out.lo = std::max(0.0, snap_nonnegative(gp - gs, gs));
    out.hi = std::numeric_limits<double>::infinity();
    bool weighted = true;
    for (SparsityLevel j = 0; j < level; ++j) {
        const SolveReport wj = minimize_on_gamma(model, t, j, budget, settings);
        out.witnesses[level_role(j)] = to_witness(wj);
        const double gap = static_cast<double>(level - j);
        out.hi = std::min(out.hi, snap_nonnegative((wj.value_g - gp) / gap, gp));
        weighted = weighted && gp <= (wj.value_g + gap * gs) / (gap + 1.0);
    }
    out.feasible = out.lo <= out.hi;
    out.weighted_average_feasible = weighted;
    if (weighted != out.feasible) {
        out.notes.push_back("feasibility forms disagree within rounding; lo <= hi is authoritative");
    }
    return out;
}

void add_midpoint(LambdaInterval& out) {
    const double gs = out.witnesses.at("g_star").value;
    const double gp = out.witnesses.at("g_prime").value;
    const double g0 = out.witnesses.at("g_0").value;
    out.midpoint_condition = gp <= 0.5 * (gs + g0);
}

} // namespace

LambdaInterval lambda_for_max_sparsity(const FidelityModel& model, const Transform& t,
                                       const EnumerationBudget& budget, const SolverSettings& settings) {
    LambdaInterval out = max_sparsity(model, t, budget, settings);
    out.rule = "max-sparsity";
    out.theorem = "Thm3.1";
    return out;
}

LambdaInterval lambda_interval_for_level(const FidelityModel& model, const Transform& t, SparsityLevel level,
                                         const EnumerationBudget& budget, const SolverSettings& settings) {
    LambdaInterval out = level_rule(model, t, level, budget, settings);
    out.rule = "level";
    out.theorem = "Thm3.2";
    return out;
}

LambdaInterval lambda_interval_level_one(const FidelityModel& model, const Transform& t,
                                         const EnumerationBudget& budget, const SolverSettings& settings) {
    LambdaInterval out = level_rule(model, t, 1, budget, settings);
    out.rule = "level-one";
    out.theorem = "Cor3.3";
    add_midpoint(out);
    return out;
}

LambdaInterval lambda_preserving_global_min(const FidelityModel& model, const Transform& t,
                                            const EnumerationBudget& budget, const SolverSettings& settings) {
    const SolveReport star = global_g(model, t, settings);
    const SparsityLevel level = star.achieved_level;

    LambdaInterval out;
    out.rule = "preserve";
    out.target_level = level;
    out.lo = 0.0;
    out.hi = std::numeric_limits<double>::infinity();
    out.witnesses["g_star"] = to_witness(star);
    const bool coupled = is_coupled(model);
    if (level == 0) {
        out.theorem = coupled ? "Thm4.4(i)" : "Thm3.4(i)";
        out.feasible = true;
        return out;
    }
    out.theorem = coupled ? "Thm4.4(ii)" : "Thm3.4(ii)";
    for (SparsityLevel j = 0; j < level; ++j) {
        const SolveReport wj = minimize_on_level(model, t, j, budget, settings);
        out.witnesses[level_role(j)] = to_witness(wj);
        if (!wj.attained) {
            out.conservative = true;
        }
        const double gap = static_cast<double>(level - j);
        out.hi = std::min(out.hi, snap_nonnegative((wj.value_g - star.value_g) / gap, star.value_g));
    }
    if (out.conservative) {
        out.notes.push_back("minimum over some stratum B_j is not attained; its infimum was used");
    }
    out.feasible = out.lo <= out.hi;
    out.weighted_average_feasible = out.feasible;
    return out;
}

LambdaInterval coupled_lambda_for_max_sparsity(const FidelityModel& model, const EnumerationBudget& budget,
                                               const SolverSettings& settings) {
    const Transform t = coupled_identity(model);
    LambdaInterval out = max_sparsity(model, t, budget, settings);
    out.rule = "coupled-max";
    out.theorem = "Thm4.1";
    out.notes.push_back("for lambda strictly above lo the minimizer (0, y_0) is claimed unique; not enforced");
    return out;
}

LambdaInterval coupled_lambda_interval_for_level(const FidelityModel& model, SparsityLevel level,
                                                 const EnumerationBudget& budget, const SolverSettings& settings) {
    const Transform t = coupled_identity(model);
    LambdaInterval out = level_rule(model, t, level, budget, settings);
    out.rule = "coupled-level";
    out.theorem = level == 1 ? "Cor4.3" : "Thm4.2";
    if (level == 1) {
        add_midpoint(out);
    }
    return out;
}

double predicted_minimum(const LambdaInterval& interval, double lambda) {
    if (interval.target_level == 0 && interval.witnesses.count("g_0") && !interval.witnesses.count("g_prime")) {
        return interval.witnesses.at("g_0").value;
    }
    const Witness& w =
        interval.witnesses.count("g_prime") ? interval.witnesses.at("g_prime") : interval.witnesses.at("g_star");
    return w.value + lambda * static_cast<double>(w.level);
}

} // namespace l0reg
