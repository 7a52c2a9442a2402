#include "l0reg/errors.hpp"
#include "l0reg/problem_io.hpp"

#include "oracles.hpp"
#include "tempdir.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace l0reg;
using nlohmann::json;
namespace lt = l0reg::testing;

namespace {

bool same(const ProblemFile& a, const ProblemFile& b) {
    return problem_to_json(a) == problem_to_json(b);
}

} // namespace

TEST_CASE("parse the bundled problem shapes") {
    const ProblemFile p = parse_problem(json::parse(R"({"version":1,"model":{"type":"paper_example"},"lambda":1})"));
    CHECK(std::holds_alternative<PaperExampleModel>(p.model));
    CHECK(p.transform().is_identity());
    CHECK(*p.lambda == 1.0);
    CHECK_FALSE(p.target_level);

    const ProblemFile q = parse_problem(json::parse(R"({
        "version": 1,
        "model": {"type": "quadratic", "A": [[1, 2], [3, 4], [5, 6]], "b": [1, 0, -1]},
        "transform": [[1, -1], [0, 1]],
        "target_level": 1,
        "budget": {"max_dimension": 10, "max_patterns": 64},
        "seed": 42
    })"));
    CHECK(q.transform().rows() == 2);
    CHECK_FALSE(q.transform().is_identity());
    CHECK(q.effective_budget().max_patterns == 64);
    CHECK(q.effective_budget().max_dimension == 10);
    CHECK(*q.seed == 42);
}

TEST_CASE("schema errors") {
    CHECK_THROWS_AS(parse_problem(json::parse(R"({"version":2,"model":{"type":"paper_example"}})")), ArgumentError);
    CHECK_THROWS_AS(parse_problem(json::parse(R"({"model":{"type":"paper_example"}})")), ArgumentError);
    CHECK_THROWS_AS(parse_problem(json::parse(R"({"version":1,"model":{"type":"cubic"}})")), ArgumentError);
    CHECK_THROWS_AS(parse_problem(json::parse(R"({"version":1,"model":{"type":"paper_example"},"lambda":-1})")),
                    ArgumentError);
    CHECK_THROWS_AS(parse_problem(json::parse(
                        R"({"version":1,"model":{"type":"quadratic","A":[[1,0],[0,1]],"b":[1,2,3]}})")),
                    DimensionError);
    CHECK_THROWS_AS(parse_problem(json::parse(
                        R"({"version":1,"model":{"type":"quadratic","A":[[1,0],[0]],"b":[1,2]}})")),
                    DimensionError);
    CHECK_THROWS_AS(parse_problem(json::parse(
                        R"({"version":1,"model":{"type":"paper_example"},"transform":[[1,0,0],[0,1,0]]})")),
                    DimensionError);
    CHECK_THROWS_AS(parse_problem(json::parse(
                        R"({"version":1,"model":{"type":"paper_example"},"target_level":3})")),
                    ArgumentError);
    CHECK_THROWS_AS(load_problem("/nonexistent/problem.json"), ArgumentError);

    lt::TempDir dir;
    CHECK_THROWS_AS(load_problem(dir.write("bad.json", "{ not json")), ArgumentError);
}

TEST_CASE("CSV references resolve relative to the problem file") {
    lt::TempDir dir;
    dir.write("A.csv", "1, 2\n3,4\n\n5,6\n");
    dir.write("b.csv", "1\n0\n-1\n");
    dir.write("M.csv", "2,0\n0,0.5\n");
    const auto path = dir.write("p.json", R"({
        "version": 1,
        "model": {"type": "quadratic", "A": {"csv": "A.csv"}, "b": {"csv": "b.csv"}},
        "transform": {"csv": "M.csv"},
        "lambda": 0.5
    })");
    const ProblemFile p = load_problem(path);
    const auto& q = std::get<QuadraticModel>(p.model);
    Eigen::MatrixXd A(3, 2);
    A << 1, 2, 3, 4, 5, 6;
    CHECK(q.A == A);
    CHECK(q.b == Eigen::Vector3d(1, 0, -1));
    CHECK(p.transform().matrix() == Eigen::Vector2d(2, 0.5).asDiagonal().toDenseMatrix());

    dir.write("ragged.csv", "1,2\n3\n");
    CHECK_THROWS_AS(read_csv_matrix(dir.path() / "ragged.csv"), DimensionError);
    dir.write("word.csv", "1,x\n");
    CHECK_THROWS_AS(read_csv_matrix(dir.path() / "word.csv"), ArgumentError);
    CHECK_THROWS_AS(read_csv_matrix(dir.path() / "missing.csv"), ArgumentError);
}

TEST_CASE("csv vectors and number formatting") {
    CHECK(parse_csv_vector(" 1, 2.5 ,-3") == Eigen::Vector3d(1, 2.5, -3));
    CHECK(parse_csv_vector("1e-3").size() == 1);
    CHECK_THROWS_AS(parse_csv_vector("1,,2"), ArgumentError);
    CHECK_THROWS_AS(parse_csv_vector(""), ArgumentError);
    CHECK_THROWS_AS(parse_csv_vector("1,2a"), ArgumentError);

    CHECK(format_double(0.0) == "0");
    CHECK(format_double(-1.0) == "-1");
    CHECK(format_double(0.1) == "0.10000000000000001");
    lt::Rng rng(701);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
        CHECK(std::stod(format_double(v)) == v);
    }
}

TEST_CASE("property: round trip through JSON") {
    lt::Rng rng(702);
    for (int trial = 0; trial < 50; ++trial) {
        ProblemFile p;
        const Index d = 1 + trial % 4;
        switch (trial % 3) {
        case 0:
            p.model = make_quadratic(lt::random_matrix(rng, d + 1, d), lt::random_vector(rng, d + 1));
            p.transform_matrix = lt::random_full_rank(rng, d, d);
            break;
        case 1:
            p.model = make_coupled_quadratic(lt::random_psd(rng, 2, 2), lt::random_vector(rng, 2), 0.7,
                                             lt::random_matrix(rng, d, 2));
            break;
        default:
            p.model = make_coupled_capped_l1(lt::random_psd(rng, 2, 2), lt::random_vector(rng, 2), 1.3,
                                             lt::random_matrix(rng, d, 2));
            break;
        }
        p.lambda = std::uniform_real_distribution<double>(0, 3)(rng);
        p.target_level = static_cast<SparsityLevel>(rng() % static_cast<std::uint64_t>(d + 1));
        p.seed = rng();
        if (trial % 2) {
            p.budget = EnumerationBudget{};
            p.budget->max_patterns = 1000 + trial;
        }
        const json once = problem_to_json(p);
        const ProblemFile back = parse_problem(json::parse(once.dump()));
        CHECK(same(p, back));
        CHECK(problem_to_json(back).dump() == once.dump());
    }
}

TEST_CASE("report serialisation") {
    LambdaInterval li;
    li.rule = "max-sparsity";
    li.lo = 1.0;
    li.hi = std::numeric_limits<double>::infinity();
    li.feasible = true;
    const json j = to_json(li);
    CHECK(j["lo"] == 1.0);
    CHECK(j["hi"].is_null());
    CHECK(j["hi_unbounded"] == true);

    CHECK(to_json(SupportSet({0, 2}, 3)) == json::array({1, 3}));
    const json pt = to_json(Point(Eigen::Vector2d(1, 2), Eigen::Vector2d(3, 4)));
    CHECK(pt["x"] == json::array({1.0, 2.0}));
    CHECK(pt["y"] == json::array({3.0, 4.0}));
    CHECK_FALSE(to_json(Point(Eigen::Vector2d(1, 2))).contains("y"));
}
