#pragma once

// Fidelity terms g and the regularized objectives f = g + lambda * ||M x||_0
// (single variable) or f = g + lambda * ||x||_0 (coupled variables (x, y),
// where only x is regularized).

#include "l0reg/sparsity.hpp"
#include "l0reg/transform.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <variant>

namespace l0reg {

/// A point of the search space. `y` is empty for single-variable models.
struct Point {
    Eigen::VectorXd x;
    Eigen::VectorXd y;

    Point() = default;
    explicit Point(Eigen::VectorXd x_) : x(std::move(x_)) {}
    Point(Eigen::VectorXd x_, Eigen::VectorXd y_) : x(std::move(x_)), y(std::move(y_)) {}

    Index size() const { return x.size() + y.size(); }

    /// (x, y) stacked into one vector.
    Eigen::VectorXd stacked() const;
    /// Inverse of stacked() for the given x dimension.
    static Point unstack(const Eigen::VectorXd& v, Index x_dim);
};

/// g(x) = ||A x - b||_2^2.
struct QuadraticModel {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
};

/// The two-dimensional non-convex example: a cone around (1, 1) with an
/// isolated lower value at (0, 1).
///   g(x) = sqrt(2)/2 * ||x - (1,1)||_2 - 1   for x != (0, 1)
///   g((0, 1)) = -0.9
struct PaperExampleModel {
    static constexpr double kSpecialValue = -0.9;
    static Eigen::Vector2d special_point() { return {0.0, 1.0}; }
    static Eigen::Vector2d center() { return {1.0, 1.0}; }
};

/// phi(y) = y^T Q y + c^T y with Q symmetric positive semidefinite.
struct ConvexQuadratic {
    Eigen::MatrixXd Q;
    Eigen::VectorXd c;

    double operator()(const Eigen::VectorXd& y) const { return y.dot(Q * y) + c.dot(y); }
};

/// g(x, y) = phi(y) + mu * ||x - D y||_2^2.
struct CoupledQuadraticModel {
    ConvexQuadratic phi;
    double mu = 1.0;
    Eigen::MatrixXd D; ///< d x d'
};

/// g(x, y) = phi(y) + mu * ||x - D y||_1.
struct CoupledCappedL1Model {
    ConvexQuadratic phi;
    double mu = 1.0;
    Eigen::MatrixXd D;
};

/// User-supplied g. The evaluator must be deterministic and finite. The
/// optional restricted minimizer receives an allowed pattern S of rows of M
/// (or of x for coupled black boxes) and returns a claimed minimizer of g over
/// {(Mx)_i = 0, i not in S}; results built on it are only as good as that claim.
struct BlackBoxModel {
    Index x_dim = 0;
    Index y_dim = 0;
    /// Rows of M (d) for single-variable black boxes; 0 means d = x_dim.
    Index pattern_dim = 0;
    std::function<double(const Point&)> evaluate;
    std::function<std::optional<Point>(const SupportSet&)> restricted_minimizer;
    std::string label = "black-box";

    Index pattern_dimension() const { return pattern_dim > 0 ? pattern_dim : x_dim; }
};

using FidelityModel =
    std::variant<QuadraticModel, PaperExampleModel, CoupledQuadraticModel, CoupledCappedL1Model, BlackBoxModel>;

/// Builders that validate dimensions, symmetrize Q and check it is PSD.
QuadraticModel make_quadratic(Eigen::MatrixXd A, Eigen::VectorXd b);
CoupledQuadraticModel make_coupled_quadratic(Eigen::MatrixXd Q, Eigen::VectorXd c, double mu, Eigen::MatrixXd D);
CoupledCappedL1Model make_coupled_capped_l1(Eigen::MatrixXd Q, Eigen::VectorXd c, double mu, Eigen::MatrixXd D);

/// True when the model has a y block and the sparsity is on x itself.
bool is_coupled(const FidelityModel& model);

/// Dimension of the regularized variable before the transform (m), or d for
/// coupled models.
Index x_dimension(const FidelityModel& model);
Index y_dimension(const FidelityModel& model);

/// Short tag used in reports: "quadratic", "paper_example", ...
std::string model_tag(const FidelityModel& model);

/// Throws DimensionError if `p` does not fit the model.
void check_point(const FidelityModel& model, const Point& p);

double eval_g(const FidelityModel& model, const Point& p);

/// lambda >= 0 is enforced at construction.
class RegularizedObjective {
public:
    RegularizedObjective(FidelityModel model, Transform transform, double lambda);

    /// Identity transform of the model's natural dimension.
    RegularizedObjective(FidelityModel model, double lambda);

    const FidelityModel& model() const { return model_; }
    const Transform& transform() const { return transform_; }
    double lambda() const { return lambda_; }

    RegularizedObjective with_lambda(double lambda) const { return {model_, transform_, lambda}; }

    /// Level of the point: ||Mx||_0, or ||x||_0 for coupled models.
    SparsityLevel level(const Point& p, const ZeroTolerance& tol = {}) const;

private:
    FidelityModel model_;
    Transform transform_;
    double lambda_;
};

/// Transform that measures the sparsity of `model`: identity for coupled
/// models; for single-variable models `t` itself after a dimension check.
void check_transform(const FidelityModel& model, const Transform& t);

double eval_f(const RegularizedObjective& obj, const Point& p, const ZeroTolerance& tol = {});

struct GlobalMinimum {
    Point point;
    double value;
};

/// Unrestricted minimizer of g where a closed form exists: least squares
/// (minimal norm) for Quadratic, (1, 1) for the example model, the joint normal
/// equations for CoupledQuadratic, and the black box's full-space restricted
/// minimizer. CoupledCappedL1 is unsupported here; use minimize_on_support with
/// the full pattern.
GlobalMinimum global_min_g(const FidelityModel& model);

/// Rewrites a quadratic model in the variables z = V^T x, i.e. A -> A V, to pair
/// with the diagonal factor returned by svd_reduce.
QuadraticModel reparametrize(const QuadraticModel& model, const Eigen::MatrixXd& right_factor);

} // namespace l0reg
