#include "l0reg/cli.hpp"

#include "l0reg/errors.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <optional>
#include <sstream>

namespace l0reg::cli {

using nlohmann::json;

namespace {

struct Options {
    std::string command;
    std::optional<std::string> problem;
    std::optional<std::string> rule;
    std::optional<long long> level;
    std::optional<double> lambda;
    std::optional<std::string> claim;
    std::optional<std::string> point;
    std::optional<std::string> grid;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::uint64_t> max_patterns;
};

ProblemFile require_problem(const Options& o) {
    if (!o.problem) {
        throw ArgumentError(o.command + " requires --problem");
    }
    ProblemFile p = load_problem(*o.problem);
    if (o.lambda) {
        if (!(*o.lambda >= 0.0) || !std::isfinite(*o.lambda)) {
            throw ArgumentError("--lambda must be finite and nonnegative");
        }
        p.lambda = *o.lambda;
    }
    if (o.level) {
        if (*o.level < 0) {
            throw ArgumentError("--level must be nonnegative");
        }
        p.target_level = static_cast<SparsityLevel>(*o.level);
    }
    if (o.seed) {
        p.seed = *o.seed;
    }
    if (o.max_patterns) {
        EnumerationBudget b = p.effective_budget();
        b.max_patterns = *o.max_patterns;
        p.budget = b;
    }
    return p;
}

double require_lambda(const ProblemFile& p, const std::string& command) {
    if (!p.lambda) {
        throw ArgumentError(command + " requires lambda (problem file or --lambda)");
    }
    return *p.lambda;
}

json envelope(const std::string& command, const json& problem, json result) {
    return json{{"tool", "l0reg"},
                {"tool_version", kToolVersion},
                {"command", command},
                {"problem", problem},
                {"result", std::move(result)}};
}

json cmd_solve(const ProblemFile& p) {
    const double lambda = require_lambda(p, "solve");
    const RegularizedObjective obj(p.model, p.transform(), lambda);
    return to_json(global_minimize_f(obj, p.effective_budget()));
}

json cmd_lambda(const ProblemFile& p, const std::string& rule) {
    const Transform t = p.transform();
    const EnumerationBudget budget = p.effective_budget();
    auto level = [&]() -> SparsityLevel {
        if (!p.target_level) {
            throw ArgumentError("rule '" + rule + "' requires --level or target_level");
        }
        return *p.target_level;
    };
    LambdaInterval interval;
    if (rule == "max-sparsity") {
        interval = lambda_for_max_sparsity(p.model, t, budget);
    } else if (rule == "level") {
        interval = lambda_interval_for_level(p.model, t, level(), budget);
    } else if (rule == "level-one") {
        interval = lambda_interval_level_one(p.model, t, budget);
    } else if (rule == "preserve") {
        interval = lambda_preserving_global_min(p.model, t, budget);
    } else if (rule == "coupled-max") {
        interval = coupled_lambda_for_max_sparsity(p.model, budget);
    } else if (rule == "coupled-level") {
        interval = coupled_lambda_interval_for_level(p.model, level(), budget);
    } else {
        throw ArgumentError("unknown rule '" + rule +
                            "'; expected max-sparsity, level, level-one, preserve, coupled-max, coupled-level");
    }
    return to_json(interval);
}

json cmd_classify(const Options& o) {
    if (!o.point) {
        throw ArgumentError("classify requires --point");
    }
    const Eigen::VectorXd x = parse_csv_vector(*o.point);
    const Transform t = o.problem ? load_problem(*o.problem).transform() : Transform::identity(x.size());
    if (x.size() != t.cols()) {
        throw DimensionError("point has " + std::to_string(x.size()) + " entries, transform expects " +
                             std::to_string(t.cols()));
    }
    const Eigen::VectorXd image = t.apply(x);
    const SparsityLevel level = classify_level(image);
    const auto d = static_cast<SparsityLevel>(t.rows());

    json r{{"point", to_json(x)},
           {"image", to_json(image)},
           {"level", level},
           {"dimension", d},
           {"support", to_json(support(image))},
           {"sparsity_safety_radius", nullptr},
           {"bd_openness_radius", nullptr}};
    if (level > 0) {
        r["sparsity_safety_radius"] = sparsity_safety_radius(image);
    }
    if (level == d) {
        r["bd_openness_radius"] = bd_openness_radius(x, t);
    }
    return r;
}

json cmd_verify(const ProblemFile& p, const Options& o) {
    if (!o.claim) {
        throw ArgumentError("verify requires --claim");
    }
    if (!o.point) {
        throw ArgumentError("verify requires --point");
    }
    const double lambda = require_lambda(p, "verify");
    if (!p.seed) {
        throw ArgumentError("verify requires a seed (problem file or --seed)");
    }
    const Eigen::VectorXd v = parse_csv_vector(*o.point);
    const Point point = Point::unstack(v, x_dimension(p.model));
    check_point(p.model, point);

    VerifyOptions options;
    options.seed = *p.seed;
    const RegularizedObjective obj(p.model, p.transform(), lambda);
    json r = to_json(verify(*o.claim, obj, point, p.effective_budget(), options));
    r["seed"] = *p.seed;
    return r;
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
    if (o.out && *o.out != "-") {
        std::ofstream file(*o.out);
        if (!file) {
            throw ArgumentError("cannot write " + *o.out);
        }
        file << text;
        return;
    }
    out << text;
}

int dispatch(const Options& o, std::ostream& out) {
    const auto start = std::chrono::steady_clock::now();
    if (o.command == "landscape") {
        const ProblemFile p = require_problem(o);
        if (!o.grid) {
            throw ArgumentError("landscape requires --grid xmin,xmax,ymin,ymax,steps");
        }
        std::ostringstream csv;
        write_landscape(p, p.lambda.value_or(0.0), parse_grid(*o.grid), csv);
        emit(o, csv.str(), out);
        return kOk;
    }

    json problem_echo = nullptr;
    json result;
    if (o.command == "classify") {
        result = cmd_classify(o);
    } else {
        const ProblemFile p = require_problem(o);
        problem_echo = problem_to_json(p);
        if (o.command == "solve") {
            result = cmd_solve(p);
        } else if (o.command == "lambda") {
            if (!o.rule) {
                throw ArgumentError("lambda requires --rule");
            }
            result = cmd_lambda(p, *o.rule);
        } else {
            result = cmd_verify(p, o);
        }
    }
    json report = envelope(o.command, problem_echo, std::move(result));
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    report["timings"] = {{"wall_seconds", elapsed.count()}};
    emit(o, report.dump(2) + "\n", out);
    return kOk;
}

} // namespace

Grid parse_grid(const std::string& text) {
    const Eigen::VectorXd v = parse_csv_vector(text);
    if (v.size() != 5) {
        throw ArgumentError("--grid expects xmin,xmax,ymin,ymax,steps");
    }
    Grid g{v[0], v[1], v[2], v[3], 0};
    if (v[4] < 2.0 || v[4] != std::floor(v[4]) || v[4] > 1e6) {
        throw ArgumentError("grid steps must be an integer in [2, 1e6]");
    }
    g.steps = static_cast<std::size_t>(v[4]);
    if (!(g.xmin < g.xmax) || !(g.ymin < g.ymax)) {
        throw ArgumentError("grid bounds must satisfy min < max");
    }
    return g;
}

std::vector<std::array<double, 2>> landscape_points(const Grid& grid) {
    auto node = [&](double lo, double hi, std::size_t i) {
        return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid.steps - 1);
    };
    std::vector<std::array<double, 2>> pts;
    pts.reserve(grid.steps * (grid.steps + 2) + 1);
    for (std::size_t i = 0; i < grid.steps; ++i) {
        const double x1 = node(grid.xmin, grid.xmax, i);
        for (std::size_t j = 0; j < grid.steps; ++j) {
            pts.push_back({x1, node(grid.ymin, grid.ymax, j)});
        }
        pts.push_back({x1, 0.0});
        pts.push_back({0.0, node(grid.ymin, grid.ymax, i)});
    }
    pts.push_back({0.0, 0.0});
    pts.push_back({0.0, 1.0});
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

void write_landscape(const ProblemFile& problem, double lambda, const Grid& grid, std::ostream& out) {
    if (is_coupled(problem.model)) {
        throw UnsupportedError("landscape needs a single-variable model");
    }
    const Transform t = problem.transform();
    if (t.rows() != 2 || t.cols() != 2) {
        throw UnsupportedError("landscape needs d = m = 2 (got " + std::to_string(t.rows()) + "x" +
                               std::to_string(t.cols()) + ")");
    }
    const RegularizedObjective obj(problem.model, t, lambda);
    out << "x1,x2,g,f,level\n";
    for (const auto& [x1, x2] : landscape_points(grid)) {
        const Point p(Eigen::Vector2d(x1, x2));
        out << format_double(x1) << ',' << format_double(x2) << ',' << format_double(eval_g(obj.model(), p)) << ','
            << format_double(eval_f(obj, p)) << ',' << obj.level(p) << '\n';
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact l0-regularized minimization: solves, lambda rules and claim checks", "l0reg"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", kToolVersion);

    Options o;
    const std::vector<std::pair<std::string, std::string>> commands{
        {"solve", "Global minimizer of f = g + lambda ||Mx||_0"},
        {"lambda", "Admissible lambda interval for a rule"},
        {"classify", "Sparsity level and safety radii of a point"},
        {"verify", "Check a claim tag at a point"},
        {"landscape", "CSV grid x1,x2,g,f,level of a two-dimensional problem"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--problem", o.problem, "Problem file (JSON)");
        sub->add_option("--out", o.out, "Output path (default stdout)");
        if (name != "classify") {
            sub->add_option("--lambda", o.lambda, "Override the problem's lambda");
            sub->add_option("--seed", o.seed, "Override the problem's seed");
            sub->add_option("--budget-max-patterns", o.max_patterns, "Override the pattern budget");
            sub->add_option("--level", o.level, "Target sparsity level");
        }
        if (name == "lambda") {
            sub->add_option("--rule", o.rule,
                            "max-sparsity | level | level-one | preserve | coupled-max | coupled-level");
        }
        if (name == "verify") {
            sub->add_option("--claim", o.claim, "Claim tag, e.g. Thm3.5(i)");
        }
        if (name == "verify" || name == "classify") {
            sub->add_option("--point", o.point, "Comma-separated point (x then y for coupled models)");
        }
        if (name == "landscape") {
            sub->add_option("--grid", o.grid, "xmin,xmax,ymin,ymax,steps");
        }
        sub->callback([&o, name = name] { o.command = name; });
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        return dispatch(o, out);
    } catch (const BudgetError& e) {
        err << "budget error: " << e.what() << '\n';
        return kBudget;
    } catch (const SolverError& e) {
        err << "solver error: " << e.what() << '\n';
        return kSolver;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const json::exception& e) {
        err << "error: malformed problem file: " << e.what() << '\n';
        return kUsage;
    }
}

} // namespace l0reg::cli
