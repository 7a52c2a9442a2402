#include "l0reg/solver.hpp"

#include "l0reg/errors.hpp"
#include "restricted.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

namespace l0reg {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_setup(const FidelityModel& model, const Transform& t) {
    check_transform(model, t);
    t.require_partition();
}

SolveReport solve_pattern(const FidelityModel& model, const Transform& t, const SupportSet& allowed,
                          const SolverSettings& settings) {
    const detail::IterativeOptions iter{settings.iterative_tol, settings.max_iterations};
    bool claimed = false;
    double solver_tol = 0.0;

    detail::RestrictedResult r = std::visit(
        overloaded{
            [&](const QuadraticModel& m) { return detail::restricted_quadratic(m, t, allowed); },
            [&](const PaperExampleModel&) { return detail::restricted_paper_example(t, allowed); },
            [&](const CoupledQuadraticModel& m) { return detail::restricted_coupled_quadratic(m, allowed); },
            [&](const CoupledCappedL1Model& m) {
                solver_tol = settings.iterative_tol;
                return detail::restricted_coupled_l1(m, allowed, iter);
            },
            [&](const BlackBoxModel& m) {
                if (!m.restricted_minimizer) {
                    throw UnsupportedError("black-box model has no restricted minimizer");
                }
                auto p = m.restricted_minimizer(allowed);
                if (!p) {
                    throw SolverError("black-box restricted minimizer returned no point for pattern " +
                                      allowed.to_string());
                }
                claimed = true;
                detail::RestrictedResult out;
                out.point = std::move(*p);
                out.value = eval_g(model, out.point);
                return out;
            },
        },
        model);

    SolveReport rep;
    rep.minimizer = std::move(r.point);
    check_point(model, rep.minimizer);
    rep.value_g = r.value;
    rep.value_f = r.value;
    rep.request = RequestKind::Support;
    rep.requested_support = allowed;
    const Eigen::VectorXd image = t.apply(rep.minimizer.x);
    rep.achieved_support = support(image, settings.zero_tol);
    rep.achieved_level = rep.achieved_support.size();
    rep.claimed = claimed;
    rep.solver_tol = solver_tol;
    rep.kkt_residual = r.kkt_residual;
    rep.iterations = r.iterations;
    rep.patterns_searched = 1;
    return rep;
}

bool within_tie(double a, double b, double rel) {
    return std::abs(a - b) <= rel * (1.0 + std::max(std::abs(a), std::abs(b)));
}

// Strict "a beats b" on (score, tie-breaks). Scores within the tie window
// fall through to the structural keys.
enum class Goal { Gamma, Level, Global };

double score(const SolveReport& r, Goal goal) { return goal == Goal::Global ? r.value_f : r.value_g; }

bool better(const SolveReport& a, const SolveReport& b, Goal goal, double tie_rel) {
    const double sa = score(a, goal);
    const double sb = score(b, goal);
    if (!within_tie(sa, sb, tie_rel)) {
        return sa < sb;
    }
    if (goal == Goal::Level && a.attained != b.attained) {
        return a.attained;
    }
    if (a.achieved_level != b.achieved_level) {
        return a.achieved_level < b.achieved_level;
    }
    return a.achieved_support < b.achieved_support;
}

struct Best {
    std::optional<SolveReport> report;
    std::vector<SolveReport> ties;
    std::uint64_t searched = 0;
};

void merge_candidate(Best& best, SolveReport cand, Goal goal, double tie_rel) {
    best.searched += cand.patterns_searched;
    if (!best.report) {
        best.report = std::move(cand);
        return;
    }
    const bool tie = within_tie(score(cand, goal), score(*best.report, goal), tie_rel);
    if (better(cand, *best.report, goal, tie_rel)) {
        std::vector<SolveReport> kept;
        if (tie) {
            kept = std::move(best.ties);
            kept.push_back(std::move(*best.report));
        }
        best.ties = std::move(kept);
        best.report = std::move(cand);
    } else if (tie) {
        best.ties.push_back(std::move(cand));
    }
}

void merge_best(Best& into, Best&& other, Goal goal, double tie_rel) {
    const std::uint64_t searched = into.searched + other.searched;
    if (other.report) {
        merge_candidate(into, std::move(*other.report), goal, tie_rel);
        for (auto& t : other.ties) {
            merge_candidate(into, std::move(t), goal, tie_rel);
        }
    }
    into.searched = searched;
}

// All k-subsets of `rows`, lexicographic.
std::vector<SupportSet> patterns_of_size(const std::vector<Index>& rows, std::size_t k, Index ambient) {
    std::vector<SupportSet> out;
    const std::size_t n = rows.size();
    if (k > n) {
        return out;
    }
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) {
        pick[i] = i;
    }
    while (true) {
        std::vector<Index> idx(k);
        for (std::size_t i = 0; i < k; ++i) {
            idx[i] = rows[pick[i]];
        }
        out.emplace_back(std::move(idx), ambient);
        std::size_t i = k;
        while (i > 0 && pick[i - 1] == n - k + i - 1) {
            --i;
        }
        if (i == 0) {
            break;
        }
        ++pick[i - 1];
        for (std::size_t j = i; j < k; ++j) {
            pick[j] = pick[j - 1] + 1;
        }
    }
    return out;
}

unsigned worker_count(const EnumerationBudget& budget, std::size_t jobs) {
    unsigned w = budget.parallel_width ? budget.parallel_width : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(jobs, 1)));
}

// Solves every pattern and reduces deterministically: contiguous chunks per
// worker, chunk results merged in chunk order.
Best solve_patterns(const FidelityModel& model, const Transform& t, const std::vector<SupportSet>& patterns,
                    double lambda, Goal goal, SparsityLevel level, const EnumerationBudget& budget,
                    const SolverSettings& settings) {
    const unsigned workers = worker_count(budget, patterns.size());
    std::vector<Best> partial(workers);
    std::vector<std::exception_ptr> errors(workers);
    const std::size_t chunk = (patterns.size() + workers - 1) / workers;

    auto run = [&](unsigned w) {
        try {
            const std::size_t lo = w * chunk;
            const std::size_t hi = std::min(patterns.size(), lo + chunk);
            for (std::size_t i = lo; i < hi; ++i) {
                SolveReport r = solve_pattern(model, t, patterns[i], settings);
                r.lambda = lambda;
                r.value_f = r.value_g + lambda * static_cast<double>(r.achieved_level);
                if (goal == Goal::Level) {
                    r.attained = r.achieved_level == level;
                }
                merge_candidate(partial[w], std::move(r), goal, settings.tie_rel);
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };

    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(run, w);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    Best total;
    for (auto& p : partial) {
        merge_best(total, std::move(p), goal, settings.tie_rel);
    }
    return total;
}

void check_level_budget(const Transform& t, SparsityLevel level, const EnumerationBudget& budget) {
    if (level > static_cast<SparsityLevel>(t.rows())) {
        throw ArgumentError("level " + std::to_string(level) + " exceeds d = " + std::to_string(t.rows()));
    }
    const std::size_t r = t.max_level();
    if (static_cast<Index>(r) > budget.max_dimension) {
        throw BudgetError("regularized dimension " + std::to_string(r) + " exceeds max_dimension " +
                          std::to_string(budget.max_dimension));
    }
    const std::uint64_t count = binomial(r, std::min<std::size_t>(level, r));
    if (count > budget.max_patterns) {
        throw BudgetError("C(" + std::to_string(r) + ", " + std::to_string(level) + ") = " + std::to_string(count) +
                          " patterns exceeds max_patterns " + std::to_string(budget.max_patterns));
    }
}

std::vector<Point> distinct_tie_points(const SolveReport& best, const std::vector<SolveReport>& ties) {
    std::vector<Point> out;
    std::vector<SupportSet> seen{best.achieved_support};
    for (const auto& t : ties) {
        if (std::find(seen.begin(), seen.end(), t.achieved_support) == seen.end()) {
            seen.push_back(t.achieved_support);
            out.push_back(t.minimizer);
        }
    }
    return out;
}

SolveReport restricted_enumeration(const FidelityModel& model, const Transform& t, SparsityLevel level,
                                   Goal goal, const EnumerationBudget& budget, const SolverSettings& settings) {
    check_setup(model, t);
    check_level_budget(t, level, budget);
    const std::size_t k = std::min<std::size_t>(level, t.max_level());
    const auto patterns = patterns_of_size(t.regularized_rows(), k, t.rows());
    Best best = solve_patterns(model, t, patterns, 0.0, goal, level, budget, settings);
    SolveReport rep = std::move(*best.report);
    rep.request = goal == Goal::Level ? RequestKind::Level : RequestKind::Gamma;
    rep.requested_level = level;
    rep.patterns_searched = best.searched;
    if (goal == Goal::Gamma) {
        rep.attained = true;
    }
    rep.ties = distinct_tie_points(rep, best.ties);
    return rep;
}

} // namespace

std::string to_string(RequestKind kind) {
    switch (kind) {
    case RequestKind::Support:
        return "support";
    case RequestKind::Gamma:
        return "gamma";
    case RequestKind::Level:
        return "level";
    case RequestKind::FullSpace:
        return "full_space";
    }
    return "unknown";
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    std::uint64_t acc = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        const std::uint64_t num = n - k + i;
        if (acc > std::numeric_limits<std::uint64_t>::max() / num) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        acc = acc * num / i;
    }
    return acc;
}

SolveReport minimize_on_support(const FidelityModel& model, const Transform& t, const SupportSet& allowed,
                                const SolverSettings& settings) {
    check_setup(model, t);
    if (allowed.ambient_dim() != t.rows()) {
        throw DimensionError("support pattern has dimension " + std::to_string(allowed.ambient_dim()) +
                             ", transform has " + std::to_string(t.rows()) + " rows");
    }
    return solve_pattern(model, t, allowed, settings);
}

SolveReport minimize_on_gamma(const FidelityModel& model, const Transform& t, SparsityLevel level,
                              const EnumerationBudget& budget, const SolverSettings& settings) {
    return restricted_enumeration(model, t, level, Goal::Gamma, budget, settings);
}

SolveReport minimize_on_level(const FidelityModel& model, const Transform& t, SparsityLevel level,
                              const EnumerationBudget& budget, const SolverSettings& settings) {
    return restricted_enumeration(model, t, level, Goal::Level, budget, settings);
}

SolveReport global_minimize_f(const RegularizedObjective& obj, const EnumerationBudget& budget,
                              const SolverSettings& settings) {
    const FidelityModel& model = obj.model();
    const Transform& t = obj.transform();
    check_setup(model, t);
    const std::size_t r = t.max_level();
    if (static_cast<Index>(r) > budget.max_dimension || r >= 64 ||
        (std::uint64_t{1} << r) > budget.max_patterns) {
        throw BudgetError("2^" + std::to_string(r) + " patterns exceeds the budget (max_dimension " +
                          std::to_string(budget.max_dimension) + ", max_patterns " +
                          std::to_string(budget.max_patterns) + ")");
    }
    const double lambda = obj.lambda();

    // g over the full space bounds g from below on every pattern, so once
    // floor + lambda * k exceeds the incumbent no pattern of size >= k can
    // hold a point of exact level >= k that beats it.
    const SolveReport floor = solve_pattern(model, t, SupportSet::full(t.rows()), settings);

    Best best;
    std::uint64_t searched = 1;
    for (std::size_t k = 0; k <= r; ++k) {
        if (best.report) {
            const double incumbent = best.report->value_f;
            const double slack = std::max(settings.tie_rel, 1e-9) * (1.0 + std::abs(incumbent));
            if (floor.value_g + lambda * static_cast<double>(k) > incumbent + slack) {
                break;
            }
        }
        const auto patterns = patterns_of_size(t.regularized_rows(), k, t.rows());
        Best level_best = solve_patterns(model, t, patterns, lambda, Goal::Global, k, budget, settings);
        searched += level_best.searched;
        merge_best(best, std::move(level_best), Goal::Global, settings.tie_rel);
    }

    SolveReport rep = std::move(*best.report);
    rep.request = RequestKind::FullSpace;
    rep.requested_level = r;
    rep.patterns_searched = searched;
    rep.attained = true;
    rep.ties = distinct_tie_points(rep, best.ties);
    return rep;
}

ProbeResult local_min_probe(const RegularizedObjective& obj, const Point& point, double radius, std::size_t samples,
                            std::uint64_t seed, double slack, const ZeroTolerance& tol) {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw ArgumentError("probe radius must be positive and finite");
    }
    if (samples < 1) {
        throw ArgumentError("probe needs at least one sample");
    }
    check_point(obj.model(), point);
    const Transform& t = obj.transform();
    const double f0 = eval_f(obj, point, tol);

    const Index nx = point.x.size();
    const Index ny = point.y.size();
    const SupportSet own = support(t.apply(point.x), tol);
    const Eigen::MatrixXd pattern_basis = t.restricted_basis(own);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    // Uniform sample of the n-ball of radius `radius * scale`.
    auto ball = [&](Index n, double scale) {
        Eigen::VectorXd v(n);
        for (Index i = 0; i < n; ++i) {
            v[i] = gauss(rng);
        }
        const double norm = v.norm();
        if (norm == 0.0) {
            return Eigen::VectorXd(Eigen::VectorXd::Zero(n));
        }
        const double rr = radius * scale * std::pow(unif(rng), 1.0 / static_cast<double>(n));
        return Eigen::VectorXd(v * (rr / norm));
    };

    ProbeResult res;
    res.radius = radius;
    res.worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < samples; ++s) {
        Point q = point;
        const bool in_pattern = (s % 2 == 1) && pattern_basis.cols() + ny > 0;
        if (in_pattern) {
            // Shrinking balls: descent directions of a smooth g fill half of a
            // small ball but a vanishing fraction of a large one.
            const Index k = pattern_basis.cols();
            const Eigen::VectorXd v = ball(k + ny, std::ldexp(1.0, -2 * static_cast<int>((s / 2) % 6)));
            if (k > 0) {
                q.x += pattern_basis * v.head(k);
            }
            q.y += v.tail(ny);
        } else {
            const Eigen::VectorXd v = ball(nx + ny, 1.0);
            q.x += v.head(nx);
            q.y += v.tail(ny);
        }
        const double margin = eval_f(obj, q, tol) - f0;
        ++res.samples;
        if (margin < res.worst_margin) {
            res.worst_margin = margin;
            if (margin < -slack) {
                res.counterexample = q;
            }
        }
    }
    res.passed = !(res.worst_margin < -slack);
    return res;
}

} // namespace l0reg
