#include "restricted.hpp"

#include "linalg.hpp"

#include "l0reg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace l0reg::detail {

RestrictedResult restricted_quadratic(const QuadraticModel& model, const Transform& t, const SupportSet& allowed) {
    const Eigen::MatrixXd basis = t.restricted_basis(allowed);
    const Eigen::MatrixXd reduced = model.A * basis;
    const Eigen::VectorXd z = min_norm_least_squares(reduced, model.b);

    RestrictedResult out;
    out.point = Point(basis * z);
    const Eigen::VectorXd residual = model.A * out.point.x - model.b;
    out.value = residual.squaredNorm();
    out.kkt_residual = 2.0 * (reduced.transpose() * residual).norm();
    return out;
}

RestrictedResult restricted_paper_example(const Transform& t, const SupportSet& allowed) {
    if (t.cols() != 2) {
        throw DimensionError("the example model lives in R^2");
    }
    const Eigen::MatrixXd basis = t.restricted_basis(allowed);
    const Eigen::Vector2d center = PaperExampleModel::center();
    const Eigen::Vector2d special = PaperExampleModel::special_point();

    RestrictedResult out;
    Eigen::Vector2d proj = Eigen::Vector2d::Zero();
    if (basis.cols() > 0) {
        proj = basis * (basis.transpose() * center);
    }
    out.point = Point(Eigen::VectorXd(proj));
    out.value = eval_g(PaperExampleModel{}, out.point);

    const bool special_reachable =
        basis.cols() > 0 && (special - basis * (basis.transpose() * special)).norm() <= 1e-14;
    if (special_reachable && PaperExampleModel::kSpecialValue < out.value) {
        out.point = Point(Eigen::VectorXd(special));
        out.value = PaperExampleModel::kSpecialValue;
    }
    return out;
}

RestrictedResult restricted_coupled_quadratic(const CoupledQuadraticModel& model, const SupportSet& allowed) {
    const Index d = model.D.rows();
    const Index dy = model.D.cols();
    if (allowed.ambient_dim() != d) {
        throw DimensionError("support pattern does not match x dimension");
    }
    const auto k = static_cast<Index>(allowed.size());

    // g = w^T H w + lin^T w with w = (x_S, y) and x = P x_S.
    Eigen::MatrixXd coupling(d, k + dy);
    coupling.setZero();
    for (Index c = 0; c < k; ++c) {
        coupling(allowed.indices()[static_cast<std::size_t>(c)], c) = 1.0;
    }
    coupling.rightCols(dy) = -model.D;

    Eigen::MatrixXd H = model.mu * coupling.transpose() * coupling;
    H.bottomRightCorner(dy, dy) += model.phi.Q;
    Eigen::VectorXd lin = Eigen::VectorXd::Zero(k + dy);
    lin.tail(dy) = model.phi.c;

    const QuadraticSolution sol = minimize_convex_quadratic(H, lin);

    RestrictedResult out;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
    for (Index c = 0; c < k; ++c) {
        x[allowed.indices()[static_cast<std::size_t>(c)]] = sol.w[c];
    }
    out.point = Point(std::move(x), sol.w.tail(dy));
    out.value = eval_g(model, out.point);
    out.kkt_residual = sol.stationarity;
    return out;
}

namespace {

double soft_threshold(double v, double t) {
    if (v > t) {
        return v - t;
    }
    if (v < -t) {
        return v + t;
    }
    return 0.0;
}

struct L1Problem {
    const Eigen::MatrixXd& Q;
    const Eigen::VectorXd& c;
    double mu;
    Eigen::MatrixXd E;

    double objective(const Eigen::VectorXd& y) const { return y.dot(Q * y) + c.dot(y) + mu * (E * y).lpNorm<1>(); }
};

struct Polished {
    Eigen::VectorXd y;
    double value;
    double certificate;
};

// Solves the smooth problem obtained by fixing the sign pattern of E y
// (zero rows become equality constraints), then measures how far the
// result is from satisfying 0 in 2Qy + c + mu E^T w with w in the l1
// subdifferential.
std::optional<Polished> polish(const L1Problem& p, const Eigen::VectorXd& pattern) {
    const Index n = p.Q.rows();
    std::vector<Index> zero_rows;
    Eigen::VectorXd signs = Eigen::VectorXd::Zero(p.E.rows());
    for (Index i = 0; i < p.E.rows(); ++i) {
        if (pattern[i] == 0.0) {
            zero_rows.push_back(i);
        } else {
            signs[i] = pattern[i] > 0.0 ? 1.0 : -1.0;
        }
    }
    Eigen::MatrixXd ez(static_cast<Index>(zero_rows.size()), n);
    for (std::size_t r = 0; r < zero_rows.size(); ++r) {
        ez.row(static_cast<Index>(r)) = p.E.row(zero_rows[r]);
    }

    Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(n, n);
    if (ez.rows() > 0) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(ez, Eigen::ComputeFullV);
        const double cut = 1e-10 * std::max(1.0, svd.singularValues().size() ? svd.singularValues()[0] : 0.0);
        Index rank = 0;
        for (Index k = 0; k < svd.singularValues().size(); ++k) {
            if (svd.singularValues()[k] > cut) {
                ++rank;
            }
        }
        basis = svd.matrixV().rightCols(n - rank);
    }

    const Eigen::VectorXd lin = p.c + p.mu * p.E.transpose() * signs;
    Eigen::VectorXd y;
    try {
        const QuadraticSolution sol =
            minimize_convex_quadratic(basis.transpose() * p.Q * basis, basis.transpose() * lin);
        y = basis * sol.w;
    } catch (const SolverError&) {
        return std::nullopt;
    }

    const Eigen::VectorXd ey = p.E * y;
    double violation = 0.0;
    for (Index i = 0; i < p.E.rows(); ++i) {
        if (signs[i] != 0.0) {
            violation = std::max(violation, -signs[i] * ey[i]);
        }
    }
    const Eigen::VectorXd grad = 2.0 * p.Q * y + lin;
    double stationarity = grad.norm();
    if (ez.rows() > 0) {
        const Eigen::MatrixXd op = p.mu * ez.transpose();
        const Eigen::VectorXd w = min_norm_least_squares(op, -grad);
        stationarity = (op * w + grad).norm();
        violation = std::max(violation, p.mu * std::max(0.0, w.lpNorm<Eigen::Infinity>() - 1.0));
    }
    return Polished{y, p.objective(y), stationarity + violation};
}

} // namespace

RestrictedResult restricted_coupled_l1(const CoupledCappedL1Model& model, const SupportSet& allowed,
                                       const IterativeOptions& options) {
    const Index d = model.D.rows();
    const Index dy = model.D.cols();
    if (allowed.ambient_dim() != d) {
        throw DimensionError("support pattern does not match x dimension");
    }
    const SupportSet pinned = allowed.complement();

    L1Problem prob{model.phi.Q, model.phi.c, model.mu, Eigen::MatrixXd(static_cast<Index>(pinned.size()), dy)};
    for (std::size_t r = 0; r < pinned.size(); ++r) {
        prob.E.row(static_cast<Index>(r)) = model.D.row(pinned.indices()[r]);
    }

    auto finish = [&](const Eigen::VectorXd& y, double kkt, long iters) {
        RestrictedResult out;
        Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
        const Eigen::VectorXd dyv = model.D * y;
        for (Index i : allowed.indices()) {
            x[i] = dyv[i];
        }
        out.point = Point(std::move(x), y);
        out.value = eval_g(model, out.point);
        out.kkt_residual = kkt;
        out.iterations = iters;
        return out;
    };

    if (prob.E.rows() == 0) {
        const QuadraticSolution sol = minimize_convex_quadratic(model.phi.Q, model.phi.c);
        return finish(sol.w, sol.stationarity, 0);
    }

    const double scale = 1.0 + model.phi.c.norm() + model.mu * prob.E.norm();
    const double accept = options.tol * scale;
    const double rho = std::max(model.mu, 1e-6);

    Eigen::MatrixXd K = 2.0 * model.phi.Q + rho * prob.E.transpose() * prob.E;
    // A proximal term keeps the y-step well posed when Q and E share a null
    // direction.
    const double kscale = std::max(1.0, K.norm());
    const double prox = detail::min_symmetric_eigenvalue(K) < 1e-10 * kscale ? 1e-6 * kscale : 0.0;
    K.diagonal().array() += prox;
    const Eigen::LDLT<Eigen::MatrixXd> factor(0.5 * (K + K.transpose()));

    Eigen::VectorXd y = Eigen::VectorXd::Zero(dy);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(prob.E.rows());
    Eigen::VectorXd u = Eigen::VectorXd::Zero(prob.E.rows());
    double best = std::numeric_limits<double>::infinity();
    std::optional<Polished> best_polish;

    constexpr long kPolishEvery = 25;
    for (long it = 1; it <= options.max_iterations; ++it) {
        y = factor.solve(-model.phi.c + rho * prob.E.transpose() * (z - u) + prox * y);
        const Eigen::VectorXd ey = prob.E * y;
        const Eigen::VectorXd z_prev = z;
        for (Index i = 0; i < z.size(); ++i) {
            z[i] = soft_threshold(ey[i] + u[i], model.mu / rho);
        }
        u += ey - z;
        best = std::min(best, prob.objective(y));

        const double primal = (ey - z).norm();
        const double dual = rho * (prob.E.transpose() * (z - z_prev)).norm();

        if (it % kPolishEvery == 0 || (primal < accept && dual < accept)) {
            if (auto pol = polish(prob, z)) {
                if (!best_polish || pol->value < best_polish->value) {
                    best_polish = pol;
                }
                if (pol->certificate <= accept) {
                    return finish(pol->y, pol->certificate, it);
                }
            }
        }
        if (primal < accept && dual < accept) {
            return finish(y, primal + dual, it);
        }
    }
    if (best_polish && best_polish->value <= best) {
        best = best_polish->value;
    }
    throw ConvergenceError("capped-l1 restricted solve did not converge within " +
                               std::to_string(options.max_iterations) + " iterations",
                           best);
}

} // namespace l0reg::detail
