#include "l0reg/fidelity.hpp"

#include "l0reg/errors.hpp"
#include "linalg.hpp"
#include "restricted.hpp"

#include <cmath>

namespace l0reg {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

ConvexQuadratic make_phi(Eigen::MatrixXd Q, Eigen::VectorXd c, Index dy) {
    if (Q.rows() != dy || Q.cols() != dy) {
        throw DimensionError("phi_Q must be " + std::to_string(dy) + " x " + std::to_string(dy));
    }
    if (c.size() != dy) {
        throw DimensionError("phi_c must have length " + std::to_string(dy));
    }
    if (!Q.allFinite() || !c.allFinite()) {
        throw ArgumentError("phi has non-finite entries");
    }
    Eigen::MatrixXd sym = 0.5 * (Q + Q.transpose());
    const double scale = std::max(1.0, sym.norm());
    if (detail::min_symmetric_eigenvalue(sym) < -1e-10 * scale) {
        throw ArgumentError("phi_Q must be positive semidefinite");
    }
    return ConvexQuadratic{std::move(sym), std::move(c)};
}

void check_coupling(double mu, const Eigen::MatrixXd& D) {
    if (!(mu > 0.0) || !std::isfinite(mu)) {
        throw ArgumentError("mu must be a positive finite number");
    }
    if (D.rows() < 1 || D.cols() < 1) {
        throw DimensionError("D must be a nonempty d x d' matrix");
    }
    if (!D.allFinite()) {
        throw ArgumentError("D has non-finite entries");
    }
}

} // namespace

Eigen::VectorXd Point::stacked() const {
    Eigen::VectorXd v(size());
    v << x, y;
    return v;
}

Point Point::unstack(const Eigen::VectorXd& v, Index x_dim) {
    if (x_dim < 0 || x_dim > v.size()) {
        throw DimensionError("cannot split stacked point");
    }
    return Point(v.head(x_dim), v.tail(v.size() - x_dim));
}

QuadraticModel make_quadratic(Eigen::MatrixXd A, Eigen::VectorXd b) {
    if (A.rows() < 1 || A.cols() < 1) {
        throw DimensionError("A must be a nonempty matrix");
    }
    if (b.size() != A.rows()) {
        throw DimensionError("b has length " + std::to_string(b.size()) + " but A has " + std::to_string(A.rows()) +
                             " rows");
    }
    if (!A.allFinite() || !b.allFinite()) {
        throw ArgumentError("quadratic model has non-finite entries");
    }
    return QuadraticModel{std::move(A), std::move(b)};
}

CoupledQuadraticModel make_coupled_quadratic(Eigen::MatrixXd Q, Eigen::VectorXd c, double mu, Eigen::MatrixXd D) {
    check_coupling(mu, D);
    const Index dy = D.cols();
    return CoupledQuadraticModel{make_phi(std::move(Q), std::move(c), dy), mu, std::move(D)};
}

CoupledCappedL1Model make_coupled_capped_l1(Eigen::MatrixXd Q, Eigen::VectorXd c, double mu, Eigen::MatrixXd D) {
    check_coupling(mu, D);
    const Index dy = D.cols();
    return CoupledCappedL1Model{make_phi(std::move(Q), std::move(c), dy), mu, std::move(D)};
}

bool is_coupled(const FidelityModel& model) {
    return std::visit(overloaded{
                          [](const CoupledQuadraticModel&) { return true; },
                          [](const CoupledCappedL1Model&) { return true; },
                          [](const BlackBoxModel& m) { return m.y_dim > 0; },
                          [](const auto&) { return false; },
                      },
                      model);
}

Index x_dimension(const FidelityModel& model) {
    return std::visit(overloaded{
                          [](const QuadraticModel& m) { return m.A.cols(); },
                          [](const PaperExampleModel&) { return Index{2}; },
                          [](const CoupledQuadraticModel& m) { return m.D.rows(); },
                          [](const CoupledCappedL1Model& m) { return m.D.rows(); },
                          [](const BlackBoxModel& m) { return m.x_dim; },
                      },
                      model);
}

Index y_dimension(const FidelityModel& model) {
    return std::visit(overloaded{
                          [](const CoupledQuadraticModel& m) { return m.D.cols(); },
                          [](const CoupledCappedL1Model& m) { return m.D.cols(); },
                          [](const BlackBoxModel& m) { return m.y_dim; },
                          [](const auto&) { return Index{0}; },
                      },
                      model);
}

std::string model_tag(const FidelityModel& model) {
    return std::visit(overloaded{
                          [](const QuadraticModel&) { return std::string("quadratic"); },
                          [](const PaperExampleModel&) { return std::string("paper_example"); },
                          [](const CoupledQuadraticModel&) { return std::string("coupled_quadratic"); },
                          [](const CoupledCappedL1Model&) { return std::string("coupled_capped_l1"); },
                          [](const BlackBoxModel& m) { return m.label; },
                      },
                      model);
}

void check_point(const FidelityModel& model, const Point& p) {
    const Index dx = x_dimension(model);
    const Index dy = y_dimension(model);
    if (p.x.size() != dx || p.y.size() != dy) {
        throw DimensionError("point has shape (" + std::to_string(p.x.size()) + ", " + std::to_string(p.y.size()) +
                             "), model expects (" + std::to_string(dx) + ", " + std::to_string(dy) + ")");
    }
}

double eval_g(const FidelityModel& model, const Point& p) {
    check_point(model, p);
    return std::visit(overloaded{
                          [&](const QuadraticModel& m) { return (m.A * p.x - m.b).squaredNorm(); },
                          [&](const PaperExampleModel&) {
                              if (p.x[0] == 0.0 && p.x[1] == 1.0) {
                                  return PaperExampleModel::kSpecialValue;
                              }
                              // sqrt(|x - c|^2 / 2) rather than sqrt(2)/2 * |x - c|: exact at lattice points.
                              const Eigen::VectorXd diff = p.x - Eigen::VectorXd(PaperExampleModel::center());
                              return std::sqrt(0.5 * diff.squaredNorm()) - 1.0;
                          },
                          [&](const CoupledQuadraticModel& m) {
                              return m.phi(p.y) + m.mu * (p.x - m.D * p.y).squaredNorm();
                          },
                          [&](const CoupledCappedL1Model& m) {
                              return m.phi(p.y) + m.mu * (p.x - m.D * p.y).lpNorm<1>();
                          },
                          [&](const BlackBoxModel& m) {
                              if (!m.evaluate) {
                                  throw ArgumentError("black-box model has no evaluator");
                              }
                              return m.evaluate(p);
                          },
                      },
                      model);
}

void check_transform(const FidelityModel& model, const Transform& t) {
    if (is_coupled(model)) {
        if (!t.is_identity() || t.rows() != x_dimension(model)) {
            throw UnsupportedError("coupled models regularize x directly; the transform must be the identity of size " +
                                   std::to_string(x_dimension(model)));
        }
        return;
    }
    if (t.cols() != x_dimension(model)) {
        throw DimensionError("transform has " + std::to_string(t.cols()) + " columns, model variable has dimension " +
                             std::to_string(x_dimension(model)));
    }
}

RegularizedObjective::RegularizedObjective(FidelityModel model, Transform transform, double lambda)
    : model_(std::move(model)), transform_(std::move(transform)), lambda_(lambda) {
    if (!(lambda_ >= 0.0) || !std::isfinite(lambda_)) {
        throw ArgumentError("lambda must be finite and nonnegative");
    }
    check_transform(model_, transform_);
}

RegularizedObjective::RegularizedObjective(FidelityModel model, double lambda)
    : RegularizedObjective(model, Transform::identity(x_dimension(model)), lambda) {}

SparsityLevel RegularizedObjective::level(const Point& p, const ZeroTolerance& tol) const {
    check_point(model_, p);
    return classify_preimage(p.x, transform_, tol);
}

double eval_f(const RegularizedObjective& obj, const Point& p, const ZeroTolerance& tol) {
    const double g = eval_g(obj.model(), p);
    return g + obj.lambda() * static_cast<double>(obj.level(p, tol));
}

GlobalMinimum global_min_g(const FidelityModel& model) {
    return std::visit(
        overloaded{
            [](const QuadraticModel& m) {
                Point p(detail::min_norm_least_squares(m.A, m.b));
                return GlobalMinimum{p, (m.A * p.x - m.b).squaredNorm()};
            },
            [](const PaperExampleModel&) {
                return GlobalMinimum{Point(Eigen::VectorXd(PaperExampleModel::center())), -1.0};
            },
            [](const CoupledQuadraticModel& m) {
                const auto r = detail::restricted_coupled_quadratic(m, SupportSet::full(m.D.rows()));
                return GlobalMinimum{r.point, r.value};
            },
            [](const CoupledCappedL1Model&) -> GlobalMinimum {
                throw UnsupportedError("no closed-form global minimum for the coupled l1 model; use "
                                       "minimize_on_support with the full pattern");
            },
            [](const BlackBoxModel& m) {
                if (!m.restricted_minimizer) {
                    throw UnsupportedError("black-box model has no restricted minimizer");
                }
                auto p = m.restricted_minimizer(SupportSet::full(m.pattern_dimension()));
                if (!p) {
                    throw SolverError("black-box restricted minimizer returned no point for the full space");
                }
                const double v = eval_g(m, *p);
                return GlobalMinimum{std::move(*p), v};
            },
        },
        model);
}

QuadraticModel reparametrize(const QuadraticModel& model, const Eigen::MatrixXd& right_factor) {
    if (right_factor.rows() != model.A.cols() || right_factor.cols() != model.A.cols()) {
        throw DimensionError("right factor must be m x m");
    }
    return QuadraticModel{model.A * right_factor, model.b};
}

} // namespace l0reg
