#pragma once

// JSON problem files, CSV matrices and JSON reports.
//
// Problem file (version 1):
//
//   {
//     "version": 1,
//     "model": { "type": "quadratic", "A": [[...]], "b": [...] }
//            | { "type": "paper_example" }
//            | { "type": "coupled_quadratic" | "coupled_capped_l1",
//                "phi_Q": [[...]], "phi_c": [...], "mu": 1.0, "D": [[...]] },
//     "transform": "identity" | [[...]] | { "csv": "M.csv" },
//     "lambda": 1.0,               (optional)
//     "target_level": 1,           (optional)
//     "budget": { "max_dimension": 20, "max_patterns": 1048576,
//                 "parallel_width": 0 },                          (optional)
//     "seed": 7                    (optional)
//   }
//
// Any matrix or vector may be given inline or as { "csv": "path" }, with
// relative paths resolved against the problem file's directory. CSV files are
// row-major, comma-separated decimals. Reports use the shortest decimal form
// that round-trips each double; +infinity is written as null.

#include "l0reg/fidelity.hpp"
#include "l0reg/lambda_rules.hpp"
#include "l0reg/solver.hpp"
#include "l0reg/verification.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>

namespace l0reg {

struct ProblemFile {
    int version = 1;
    FidelityModel model = PaperExampleModel{};
    /// Absent means the identity of the model's natural dimension.
    std::optional<Eigen::MatrixXd> transform_matrix;
    std::optional<double> lambda;
    std::optional<SparsityLevel> target_level;
    std::optional<EnumerationBudget> budget;
    std::optional<std::uint64_t> seed;

    Transform transform() const;
    EnumerationBudget effective_budget() const { return budget.value_or(EnumerationBudget{}); }
};

/// Throws ArgumentError / DimensionError on schema or dimension problems.
ProblemFile parse_problem(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ProblemFile load_problem(const std::filesystem::path& path);

/// Inline form of the problem (CSV references are expanded).
nlohmann::json problem_to_json(const ProblemFile& problem);

Eigen::MatrixXd read_csv_matrix(const std::filesystem::path& path);
/// Parses "1,2.5,-3" (whitespace tolerant).
Eigen::VectorXd parse_csv_vector(const std::string& text);

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double v);

nlohmann::json to_json(const Eigen::VectorXd& v);
nlohmann::json to_json(const Point& p);
nlohmann::json to_json(const SupportSet& s);
nlohmann::json to_json(const SolveReport& r);
nlohmann::json to_json(const LambdaInterval& interval);
nlohmann::json to_json(const VerificationVerdict& v);

} // namespace l0reg
