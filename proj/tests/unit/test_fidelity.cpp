#include "l0reg/errors.hpp"
#include "l0reg/fidelity.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace l0reg;
using l0reg::testing::Rng;

namespace {

Point pt(double a, double b) { return Point(Eigen::Vector2d(a, b)); }

} // namespace

TEST_CASE("example model values") {
    const PaperExampleModel m;
    CHECK(eval_g(m, pt(1, 1)) == -1.0);
    CHECK(eval_g(m, pt(0, 0)) == 0.0);
    CHECK(eval_g(m, pt(0, 1)) == -0.9);
    // The radial formula would give sqrt(2)/2 - 1 there; the override wins.
    CHECK(eval_g(m, pt(0, 1 + 1e-15)) == doctest::Approx(std::sqrt(2.0) / 2.0 - 1.0));

    const RegularizedObjective f(m, 1.0);
    CHECK(eval_f(f, pt(0, 0)) == 0.0);
    CHECK(eval_f(f, pt(1, 1)) == 1.0);
    CHECK(eval_f(f, pt(0, 1)) == doctest::Approx(0.1));

    const GlobalMinimum gm = global_min_g(m);
    CHECK(gm.point.x.isApprox(Eigen::Vector2d(1, 1)));
    CHECK(gm.value == -1.0);
    CHECK_THROWS_AS(eval_g(m, Point(Eigen::Vector3d(0, 0, 0))), DimensionError);
}

TEST_CASE("quadratic global minimum") {
    const QuadraticModel q = make_quadratic(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(3, 4));
    const GlobalMinimum gm = global_min_g(q);
    CHECK(gm.point.x.isApprox(Eigen::Vector2d(3, 4)));
    CHECK(gm.value == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(make_quadratic(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector3d(1, 2, 3)), DimensionError);

    // Rank-deficient A: minimal-norm solution.
    Eigen::MatrixXd A(1, 2);
    A << 1, 1;
    const GlobalMinimum mn = global_min_g(make_quadratic(A, Eigen::VectorXd::Constant(1, 2.0)));
    CHECK(mn.point.x.isApprox(Eigen::Vector2d(1, 1)));
}

TEST_CASE("coupled quadratic global minimum against a grid") {
    const auto zero = make_coupled_quadratic(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d::Zero(), 1.0,
                                             Eigen::MatrixXd::Identity(2, 2));
    const GlobalMinimum gm = global_min_g(zero);
    CHECK(gm.point.x.norm() <= 1e-12);
    CHECK(gm.point.y.norm() <= 1e-12);
    CHECK(gm.value == doctest::Approx(0.0));

    const auto shifted = make_coupled_quadratic(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(-2, 0), 1.0,
                                                Eigen::MatrixXd::Identity(2, 2));
    const GlobalMinimum s = global_min_g(shifted);
    // Grid search on the slice x = y (optimal since the coupling term vanishes there).
    double best = 1e300;
    for (double a = -3.0; a <= 3.0; a += 0.01) {
        for (double b = -3.0; b <= 3.0; b += 0.01) {
            const Eigen::Vector2d y(a, b);
            best = std::min(best, eval_g(shifted, Point(y, y)));
        }
    }
    CHECK(s.value <= best + 1e-12);
    CHECK(s.value == doctest::Approx(best).epsilon(1e-3));
    CHECK(s.value == doctest::Approx(-1.0));
}

TEST_CASE("model validation") {
    Eigen::MatrixXd notpsd = Eigen::MatrixXd::Identity(2, 2);
    notpsd(1, 1) = -1.0;
    CHECK_THROWS_AS(make_coupled_quadratic(notpsd, Eigen::Vector2d::Zero(), 1.0, Eigen::MatrixXd::Identity(2, 2)),
                    ArgumentError);
    CHECK_THROWS_AS(make_coupled_quadratic(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d::Zero(), 0.0,
                                           Eigen::MatrixXd::Identity(2, 2)),
                    ArgumentError);
    CHECK_THROWS_AS(make_coupled_capped_l1(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector3d::Zero(), 1.0,
                                           Eigen::MatrixXd::Identity(2, 2)),
                    DimensionError);
    const auto l1 = make_coupled_capped_l1(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d::Zero(), 1.0,
                                           Eigen::MatrixXd::Identity(2, 2));
    CHECK_THROWS_AS(global_min_g(l1), UnsupportedError);
    CHECK_THROWS_AS(RegularizedObjective(PaperExampleModel{}, -1.0), ArgumentError);
    CHECK_THROWS_AS(RegularizedObjective(l1, Transform::identity(3), 1.0), UnsupportedError);
}

TEST_CASE("coupled objective counts the nonzeros of x only") {
    const auto m = make_coupled_capped_l1(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(1, -1), 2.0,
                                          Eigen::MatrixXd::Identity(2, 2));
    const Point p(Eigen::Vector2d(0, 3), Eigen::Vector2d(1, 1));
    const double g = 2.0 + 0.0 + 2.0 * (1.0 + 2.0);
    CHECK(eval_g(m, p) == doctest::Approx(g));
    CHECK(eval_f(RegularizedObjective(m, 0.5), p) == doctest::Approx(g + 0.5));
}

TEST_CASE("black-box model") {
    BlackBoxModel bb;
    bb.x_dim = 2;
    bb.evaluate = [](const Point& p) { return p.x.squaredNorm(); };
    CHECK(eval_g(bb, pt(3, 4)) == 25.0);
    CHECK_THROWS_AS(global_min_g(bb), UnsupportedError);
}

TEST_CASE("property: terracing identity and lambda monotonicity") {
    Rng rng(301);
    const auto q = make_quadratic(l0reg::testing::random_matrix(rng, 4, 3), l0reg::testing::random_vector(rng, 4));
    const Transform t(l0reg::testing::random_full_rank(rng, 3, 3));
    for (int trial = 0; trial < 1000; ++trial) {
        Eigen::VectorXd y = l0reg::testing::random_vector(rng, 3);
        y[trial % 3] = 0.0;
        if (trial % 5 == 0) {
            y.setZero();
        }
        const Eigen::VectorXd x = pseudo_inverse_apply(t, y);
        const Point p(x);
        const double lambda = 0.1 * (trial % 17);
        const RegularizedObjective f(q, t, lambda);
        const SparsityLevel level = classify_preimage(x, t);
        CHECK(eval_f(f, p) - eval_g(q, p) == doctest::Approx(lambda * static_cast<double>(level)));
        const double f2 = eval_f(f.with_lambda(lambda + 0.5), p);
        CHECK(f2 >= eval_f(f, p));
        if (level > 0) {
            CHECK(f2 > eval_f(f, p));
        }
    }
}

TEST_CASE("property: lambda = 0 gives f = g") {
    Rng rng(302);
    const RegularizedObjective f(PaperExampleModel{}, 0.0);
    for (int trial = 0; trial < 50; ++trial) {
        const Point p(l0reg::testing::random_vector(rng, 2));
        CHECK(eval_f(f, p) == eval_g(f.model(), p));
    }
}

TEST_CASE("property: quadratic fidelity is convex") {
    Rng rng(303);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto q = make_quadratic(l0reg::testing::random_matrix(rng, 5, 4), l0reg::testing::random_vector(rng, 5));
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::VectorXd a = l0reg::testing::random_vector(rng, 4, 3.0);
        const Eigen::VectorXd b = l0reg::testing::random_vector(rng, 4, 3.0);
        const double s = u(rng);
        const double lhs = eval_g(q, Point(Eigen::VectorXd(s * a + (1 - s) * b)));
        CHECK(lhs <= s * eval_g(q, Point(a)) + (1 - s) * eval_g(q, Point(b)) + 1e-9);
    }
}
