#include "l0reg/problem_io.hpp"

#include "l0reg/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace l0reg {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double parse_number(const std::string& cell, const std::string& where) {
    std::string s = cell;
    const auto first = s.find_first_not_of(" \t\r");
    const auto last = s.find_last_not_of(" \t\r");
    if (first == std::string::npos) {
        throw ArgumentError("empty numeric field in " + where);
    }
    s = s.substr(first, last - first + 1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw ArgumentError("invalid number '" + s + "' in " + where);
    }
    return v;
}

std::vector<double> split_row(const std::string& line, const std::string& where) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        out.push_back(parse_number(cell, where));
    }
    return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& rel) {
    std::filesystem::path p(rel);
    return p.is_absolute() || base.empty() ? p : base / p;
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::filesystem::path& base, const std::string& name) {
    if (j.is_object() && j.contains("csv")) {
        return read_csv_matrix(resolve(base, j.at("csv").get<std::string>()));
    }
    if (!j.is_array() || j.empty()) {
        throw ArgumentError(name + " must be a nonempty array of rows or {\"csv\": path}");
    }
    const auto rows = static_cast<Index>(j.size());
    if (!j[0].is_array() || j[0].empty()) {
        throw ArgumentError(name + " rows must be nonempty arrays");
    }
    const auto cols = static_cast<Index>(j[0].size());
    Eigen::MatrixXd m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
            throw DimensionError(name + " is ragged at row " + std::to_string(r + 1));
        }
        for (Index c = 0; c < cols; ++c) {
            const json& cell = row[static_cast<std::size_t>(c)];
            if (!cell.is_number()) {
                throw ArgumentError(name + " has a non-numeric entry");
            }
            m(r, c) = cell.get<double>();
        }
    }
    return m;
}

Eigen::VectorXd vector_from_json(const json& j, const std::filesystem::path& base, const std::string& name) {
    if (j.is_object() && j.contains("csv")) {
        const Eigen::MatrixXd m = read_csv_matrix(resolve(base, j.at("csv").get<std::string>()));
        if (m.rows() != 1 && m.cols() != 1) {
            throw DimensionError(name + " CSV must hold a single row or column");
        }
        return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
    }
    if (!j.is_array()) {
        throw ArgumentError(name + " must be an array or {\"csv\": path}");
    }
    Eigen::VectorXd v(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) {
            throw ArgumentError(name + " has a non-numeric entry");
        }
        v[static_cast<Index>(i)] = j[i].get<double>();
    }
    return v;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Index c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

FidelityModel model_from_json(const json& j, const std::filesystem::path& base) {
    if (!j.is_object() || !j.contains("type")) {
        throw ArgumentError("model must be an object with a \"type\" field");
    }
    const std::string type = j.at("type").get<std::string>();
    if (type == "quadratic") {
        return make_quadratic(matrix_from_json(j.at("A"), base, "A"), vector_from_json(j.at("b"), base, "b"));
    }
    if (type == "paper_example") {
        return PaperExampleModel{};
    }
    if (type == "coupled_quadratic" || type == "coupled_capped_l1") {
        Eigen::MatrixXd Q = matrix_from_json(j.at("phi_Q"), base, "phi_Q");
        Eigen::VectorXd c = vector_from_json(j.at("phi_c"), base, "phi_c");
        const double mu = j.at("mu").get<double>();
        Eigen::MatrixXd D = matrix_from_json(j.at("D"), base, "D");
        if (type == "coupled_quadratic") {
            return make_coupled_quadratic(std::move(Q), std::move(c), mu, std::move(D));
        }
        return make_coupled_capped_l1(std::move(Q), std::move(c), mu, std::move(D));
    }
    throw ArgumentError("unknown model type '" + type +
                        "' (expected quadratic, paper_example, coupled_quadratic, coupled_capped_l1)");
}

json model_to_json(const FidelityModel& model) {
    return std::visit(overloaded{
                          [](const QuadraticModel& m) {
                              return json{{"type", "quadratic"}, {"A", matrix_to_json(m.A)}, {"b", to_json(m.b)}};
                          },
                          [](const PaperExampleModel&) { return json{{"type", "paper_example"}}; },
                          [](const CoupledQuadraticModel& m) {
                              return json{{"type", "coupled_quadratic"},
                                          {"phi_Q", matrix_to_json(m.phi.Q)},
                                          {"phi_c", to_json(m.phi.c)},
                                          {"mu", m.mu},
                                          {"D", matrix_to_json(m.D)}};
                          },
                          [](const CoupledCappedL1Model& m) {
                              return json{{"type", "coupled_capped_l1"},
                                          {"phi_Q", matrix_to_json(m.phi.Q)},
                                          {"phi_c", to_json(m.phi.c)},
                                          {"mu", m.mu},
                                          {"D", matrix_to_json(m.D)}};
                          },
                          [](const BlackBoxModel&) -> json {
                              throw UnsupportedError("black-box models cannot be serialized");
                          },
                      },
                      model);
}

} // namespace

Transform ProblemFile::transform() const {
    if (transform_matrix) {
        return Transform(*transform_matrix);
    }
    return Transform::identity(x_dimension(model));
}

ProblemFile parse_problem(const json& doc, const std::filesystem::path& base_dir) {
    if (!doc.is_object()) {
        throw ArgumentError("problem file must be a JSON object");
    }
    ProblemFile p;
    if (!doc.contains("version") || !doc["version"].is_number_integer()) {
        throw ArgumentError("problem file needs an integer \"version\" (1)");
    }
    p.version = doc["version"].get<int>();
    if (p.version != 1) {
        throw ArgumentError("unsupported problem version " + std::to_string(p.version));
    }
    if (!doc.contains("model")) {
        throw ArgumentError("problem file has no model");
    }
    p.model = model_from_json(doc.at("model"), base_dir);

    if (doc.contains("transform")) {
        const json& t = doc.at("transform");
        if (t.is_string()) {
            if (t.get<std::string>() != "identity") {
                throw ArgumentError("transform string must be \"identity\"");
            }
        } else {
            p.transform_matrix = matrix_from_json(t, base_dir, "transform");
        }
    }
    if (doc.contains("lambda") && !doc.at("lambda").is_null()) {
        const double lambda = doc.at("lambda").get<double>();
        if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
            throw ArgumentError("lambda must be finite and nonnegative");
        }
        p.lambda = lambda;
    }
    if (doc.contains("target_level") && !doc.at("target_level").is_null()) {
        const auto level = doc.at("target_level").get<long long>();
        if (level < 0) {
            throw ArgumentError("target_level must be nonnegative");
        }
        p.target_level = static_cast<SparsityLevel>(level);
    }
    if (doc.contains("budget") && !doc.at("budget").is_null()) {
        const json& b = doc.at("budget");
        EnumerationBudget budget;
        budget.max_dimension = b.value("max_dimension", budget.max_dimension);
        budget.max_patterns = b.value("max_patterns", budget.max_patterns);
        budget.parallel_width = b.value("parallel_width", budget.parallel_width);
        p.budget = budget;
    }
    if (doc.contains("seed") && !doc.at("seed").is_null()) {
        p.seed = doc.at("seed").get<std::uint64_t>();
    }

    // Cross-validate dimensions now rather than at first use.
    const Transform t = p.transform();
    check_transform(p.model, t);
    if (p.target_level && *p.target_level > static_cast<SparsityLevel>(t.rows())) {
        throw ArgumentError("target_level exceeds d = " + std::to_string(t.rows()));
    }
    return p;
}

ProblemFile load_problem(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ArgumentError("cannot open problem file " + path.string());
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ArgumentError("problem file " + path.string() + " is not valid JSON: " + e.what());
    }
    return parse_problem(doc, path.parent_path());
}

json problem_to_json(const ProblemFile& p) {
    json doc;
    doc["version"] = p.version;
    doc["model"] = model_to_json(p.model);
    doc["transform"] = p.transform_matrix ? matrix_to_json(*p.transform_matrix) : json("identity");
    if (p.lambda) {
        doc["lambda"] = *p.lambda;
    }
    if (p.target_level) {
        doc["target_level"] = *p.target_level;
    }
    if (p.budget) {
        doc["budget"] = {{"max_dimension", p.budget->max_dimension},
                         {"max_patterns", p.budget->max_patterns},
                         {"parallel_width", p.budget->parallel_width}};
    }
    if (p.seed) {
        doc["seed"] = *p.seed;
    }
    return doc;
}

Eigen::MatrixXd read_csv_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ArgumentError("cannot open CSV file " + path.string());
    }
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        rows.push_back(split_row(line, path.string()));
        if (rows.back().size() != rows.front().size()) {
            throw DimensionError("CSV file " + path.string() + " is ragged at row " + std::to_string(rows.size()));
        }
    }
    if (rows.empty()) {
        throw ArgumentError("CSV file " + path.string() + " is empty");
    }
    Eigen::MatrixXd m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            m(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
        }
    }
    return m;
}

Eigen::VectorXd parse_csv_vector(const std::string& text) {
    const std::vector<double> vals = split_row(text, "vector \"" + text + "\"");
    if (vals.empty()) {
        throw ArgumentError("empty vector");
    }
    return Eigen::Map<const Eigen::VectorXd>(vals.data(), static_cast<Index>(vals.size()));
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Index i = 0; i < v.size(); ++i) {
        arr.push_back(v[i]);
    }
    return arr;
}

json to_json(const Point& p) {
    json j{{"x", to_json(p.x)}};
    if (p.y.size() > 0) {
        j["y"] = to_json(p.y);
    }
    return j;
}

json to_json(const SupportSet& s) { return json(s.one_based()); }

json to_json(const SolveReport& r) {
    json req{{"kind", to_string(r.request)}};
    if (r.request == RequestKind::Support) {
        req["support"] = to_json(r.requested_support);
    } else {
        req["level"] = r.requested_level;
    }
    json ties = json::array();
    for (const auto& t : r.ties) {
        ties.push_back(to_json(t));
    }
    return json{{"minimizer", to_json(r.minimizer)},
                {"value_g", r.value_g},
                {"value_f", r.value_f},
                {"lambda", r.lambda},
                {"requested", req},
                {"achieved_level", r.achieved_level},
                {"achieved_support", to_json(r.achieved_support)},
                {"attained", r.attained},
                {"claimed", r.claimed},
                {"solver_tol", r.solver_tol},
                {"kkt_residual", r.kkt_residual},
                {"iterations", r.iterations},
                {"patterns_searched", r.patterns_searched},
                {"ties", ties}};
}

json to_json(const LambdaInterval& interval) {
    json wit = json::object();
    for (const auto& [role, w] : interval.witnesses) {
        wit[role] = json{{"point", to_json(w.point)}, {"value", w.value}, {"level", w.level}, {"attained", w.attained}};
    }
    json j{{"rule", interval.rule},
           {"theorem", interval.theorem},
           {"lo", interval.lo},
           {"hi", number_or_null(interval.hi)},
           {"hi_unbounded", interval.unbounded_above()},
           {"feasible", interval.feasible},
           {"target_level", interval.target_level},
           {"witnesses", wit},
           {"weighted_average_feasible", interval.weighted_average_feasible},
           {"conservative", interval.conservative},
           {"notes", interval.notes}};
    if (interval.midpoint_condition) {
        j["midpoint_condition"] = *interval.midpoint_condition;
    }
    return j;
}

json to_json(const VerificationVerdict& v) {
    json j{{"claim", v.claim},
           {"holds", v.holds},
           {"applicable", v.applicable},
           {"tolerance_used", v.tolerance_used},
           {"samples", v.samples},
           {"radius", v.radius},
           {"confidence", v.samples > 0 ? "sampled" : "exact"},
           {"notes", v.notes}};
    j["witness"] = v.witness ? to_json(*v.witness) : json(nullptr);
    j["witness_value"] = v.witness_value ? number_or_null(*v.witness_value) : json(nullptr);
    return j;
}

} // namespace l0reg
