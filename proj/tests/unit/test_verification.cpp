#include "l0reg/errors.hpp"
#include "l0reg/verification.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace l0reg;
using l0reg::testing::Rng;
namespace lt = l0reg::testing;

namespace {

QuadraticModel dense_instance() {
    return make_quadratic(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(4, 1));
}

CoupledQuadraticModel random_coupled(Rng& rng, Index d, Index dp) {
    const Eigen::MatrixXd Q = lt::random_psd(rng, dp, dp) + 0.2 * Eigen::MatrixXd::Identity(dp, dp);
    return make_coupled_quadratic(Q, lt::random_vector(rng, dp, 2.0), 0.5 + std::uniform_real_distribution<double>(0, 1)(rng),
                                  lt::random_matrix(rng, d, dp));
}

} // namespace

TEST_CASE("necessary condition on the example model") {
    const RegularizedObjective f(PaperExampleModel{}, 1.0);
    const VerificationVerdict v = check_necessary_minimizer_of_g_on_gamma(f, Point(Eigen::Vector2d(0, 0)));
    CHECK(v.holds);
    CHECK(v.claim == "Thm3.5(i)");

    // (0, 1) minimizes g over Gamma_1 ...
    CHECK(check_necessary_minimizer_of_g_on_gamma(f, Point(Eigen::Vector2d(0, 1))).holds);
    // ... but is not a global minimizer of f.
    const VerificationVerdict g = check_global_optimality(f, Point(Eigen::Vector2d(0, 1)));
    CHECK_FALSE(g.holds);
    REQUIRE(g.witness);
    CHECK(g.witness->x.isZero());
    CHECK(*g.witness_value == 0.0);

    // A point that is not optimal on its stratum is refuted with a better one.
    const VerificationVerdict bad = check_necessary_minimizer_of_g_on_gamma(f, Point(Eigen::Vector2d(2, 0)));
    CHECK_FALSE(bad.holds);
    REQUIRE(bad.witness_value);
    CHECK(*bad.witness_value == -0.9);
}

TEST_CASE("sparsity dichotomy") {
    const RegularizedObjective f(PaperExampleModel{}, 1.0);
    CHECK(check_sparsity_dichotomy(f, Point(Eigen::Vector2d(0, 0))).holds);
    const RegularizedObjective g(PaperExampleModel{}, 0.0);
    CHECK(check_sparsity_dichotomy(g, Point(Eigen::Vector2d(1, 1))).holds);
    // A dense point that is not the global minimizer of g fails.
    CHECK_FALSE(check_sparsity_dichotomy(g, Point(Eigen::Vector2d(2, 2))).holds);
}

TEST_CASE("dense local minimizer that is not global") {
    const Point xs(Eigen::Vector2d(4, 1));
    const VerificationVerdict v = check_dense_local_not_global(RegularizedObjective(dense_instance(), 2.0), xs);
    CHECK(v.applicable);
    CHECK(v.holds);
    CHECK(v.claim == "Thm3.4(iv)");
    REQUIRE(v.witness);
    CHECK(v.witness->x.isApprox(Eigen::Vector2d(4, 0)));
    CHECK(v.samples == 1000);
    CHECK(v.radius == doctest::Approx(0.5));

    const VerificationVerdict low = check_dense_local_not_global(RegularizedObjective(dense_instance(), 0.5), xs);
    CHECK_FALSE(low.applicable);
    CHECK(global_minimize_f(RegularizedObjective(dense_instance(), 0.5)).minimizer.x.isApprox(xs.x));

    CHECK_FALSE(check_dense_local_not_global(RegularizedObjective(dense_instance(), 0.0), xs).applicable);

    CHECK_THROWS_AS(check_dense_local_not_global(RegularizedObjective(dense_instance(), 2.0), Point(Eigen::Vector2d(4, 0))),
                    PreconditionError);
    CHECK_THROWS_AS(check_dense_local_not_global(RegularizedObjective(dense_instance(), 2.0), Point(Eigen::Vector2d(3, 1))),
                    PreconditionError);
}

TEST_CASE("local equivalence on a coupled quadratic") {
    const auto m = make_coupled_quadratic(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(-2, 0), 1.0,
                                          Eigen::MatrixXd::Identity(2, 2));
    VerifyOptions opt;
    opt.seed = 5;
    const SolveReport exact = minimize_on_support(m, Transform::identity(2), SupportSet({0}, 2));
    EquivalenceDetail detail;
    const VerificationVerdict v = check_local_equivalence(m, 0.5, exact.minimizer, opt, &detail);
    CHECK(v.holds);
    CHECK(v.claim == "Cor4.9");
    CHECK(detail.restricted_minimizer);
    CHECK(detail.probe_passed);

    // Move one support coordinate off its optimum.
    Point off = exact.minimizer;
    off.x[0] += 0.1;
    const VerificationVerdict w = check_local_equivalence(m, 0.5, off, opt, &detail);
    CHECK(w.holds);
    CHECK_FALSE(detail.restricted_minimizer);
    CHECK_FALSE(detail.probe_passed);
    REQUIRE(w.witness);
    CHECK(support(w.witness->x) == support(off.x));

    // x = 0 and y minimizing phi(y) + mu |D y|^2.
    const SolveReport zero = minimize_on_support(m, Transform::identity(2), SupportSet::empty(2));
    CHECK(check_local_equivalence(m, 0.5, zero.minimizer, opt).holds);
    CHECK(check_local_equivalence(m, 2.0, zero.minimizer, opt).holds);

    CHECK_THROWS_AS(check_local_equivalence(m, 0.0, zero.minimizer, opt), PreconditionError);
    CHECK_THROWS_AS(check_local_equivalence(PaperExampleModel{}, 1.0, Point(Eigen::Vector2d(0, 0)), opt),
                    UnsupportedError);
}

TEST_CASE("local equivalence on a coupled l1 model") {
    Rng rng(601);
    const Eigen::MatrixXd Q = lt::random_psd(rng, 2, 2) + 0.5 * Eigen::MatrixXd::Identity(2, 2);
    const auto m = make_coupled_capped_l1(Q, lt::random_vector(rng, 2), 0.8, lt::random_matrix(rng, 3, 2));
    VerifyOptions opt;
    opt.seed = 9;
    const SolveReport exact = minimize_on_support(m, Transform::identity(3), SupportSet({0, 2}, 3));
    EquivalenceDetail detail;
    const VerificationVerdict v = check_local_equivalence(m, 0.3, exact.minimizer, opt, &detail);
    CHECK(v.claim == "Cor4.10");
    CHECK(v.holds);
    CHECK(detail.restricted_minimizer);
}

TEST_CASE("property: random coupled instances") {
    Rng rng(602);
    VerifyOptions opt;
    opt.probe_samples = 400;
    for (int trial = 0; trial < 20; ++trial) {
        const Index d = 2 + trial % 3;
        const Index dp = 1 + trial % 3;
        const auto m = random_coupled(rng, d, dp);
        std::vector<Index> s;
        for (Index i = 0; i < d; ++i) {
            if (rng() % 2) {
                s.push_back(i);
            }
        }
        const SupportSet S(s, d);
        const SolveReport exact = minimize_on_support(m, Transform::identity(d), S);
        if (support(exact.minimizer.x) != S) {
            continue; // solution fell to a smaller support; its own pattern differs
        }
        opt.seed = static_cast<std::uint64_t>(trial);
        EquivalenceDetail detail;
        CHECK(check_local_equivalence(m, 0.4, exact.minimizer, opt, &detail).holds);
        CHECK(detail.probe_passed);
        Point off = exact.minimizer;
        off.y[0] += 0.2;
        CHECK(check_local_equivalence(m, 0.4, off, opt, &detail).holds);
        CHECK_FALSE(detail.restricted_minimizer);
    }
}

TEST_CASE("property: necessary conditions at brute-force minimizers") {
    Rng rng(603);
    for (int trial = 0; trial < 60; ++trial) {
        const Index d = 2 + trial % 4;
        const auto q = make_quadratic(lt::random_matrix(rng, d + 1, d), lt::random_vector(rng, d + 1, 2.0));
        const double lo = minimize_on_gamma(q, Transform::identity(d), 0).value_g - global_min_g(q).value;
        const double lambda = 2.0 * lo * std::uniform_real_distribution<double>(0, 1)(rng);
        const RegularizedObjective obj(q, lambda);
        const SolveReport best = global_minimize_f(obj);
        CHECK(check_necessary_minimizer_of_g_on_gamma(obj, best.minimizer).holds);
        CHECK(check_sparsity_dichotomy(obj, best.minimizer).holds);
        CHECK(check_global_optimality(obj, best.minimizer).holds);
    }
}

TEST_CASE("verify dispatch") {
    const RegularizedObjective f(PaperExampleModel{}, 1.0);
    const VerificationVerdict v = verify("Cor3.6", f, Point(Eigen::Vector2d(0, 0)), {}, {});
    CHECK(v.claim == "Cor3.6");
    CHECK(v.holds);
    try {
        verify("Thm9.9", f, Point(Eigen::Vector2d(0, 0)), {}, {});
        FAIL("expected ArgumentError");
    } catch (const ArgumentError& e) {
        CHECK(std::string(e.what()).find("Thm3.5(i)") != std::string::npos);
    }
    for (const auto& claim : verification_claims()) {
        CHECK_FALSE(claim.empty());
    }
}
