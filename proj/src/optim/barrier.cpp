#include "tollkit/optim/barrier.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "tollkit/error.hpp"
#include "tollkit/optim/simplex.hpp"

namespace tollkit::optim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// One barrier term: slack = offset + direction . x, which must stay > 0.
// Bounds are stored separately so their slack is computed without cancellation.
struct BarrierTerms {
  const LinearConstraints& con;
  std::vector<Eigen::Index> lower_index;
  std::vector<Eigen::Index> upper_index;

  explicit BarrierTerms(const LinearConstraints& c) : con(c) {
    for (Eigen::Index j = 0; j < c.num_variables(); ++j) {
      if (std::isfinite(c.lower(j))) lower_index.push_back(j);
      if (std::isfinite(c.upper(j))) upper_index.push_back(j);
    }
  }

  Eigen::VectorXd row_slack(const Eigen::VectorXd& x) const {
    return con.inequality_rhs - con.inequality_matrix * x;
  }

  double min_slack(const Eigen::VectorXd& x) const {
    double s = kInf;
    if (con.inequality_matrix.rows() > 0) s = std::min(s, row_slack(x).minCoeff());
    for (auto j : lower_index) s = std::min(s, x(j) - con.lower(j));
    for (auto j : upper_index) s = std::min(s, con.upper(j) - x(j));
    return s;
  }

  double log_sum(const Eigen::VectorXd& x) const {
    double total = 0.0;
    if (con.inequality_matrix.rows() > 0) total += row_slack(x).array().log().sum();
    for (auto j : lower_index) total += std::log(x(j) - con.lower(j));
    for (auto j : upper_index) total += std::log(con.upper(j) - x(j));
    return total;
  }

  // Gradient and Hessian of -sum(log slack).
  void derivatives(const Eigen::VectorXd& x, Eigen::VectorXd& grad, Eigen::MatrixXd& hess) const {
    const Eigen::Index n = x.size();
    grad = Eigen::VectorXd::Zero(n);
    hess = Eigen::MatrixXd::Zero(n, n);
    if (con.inequality_matrix.rows() > 0) {
      Eigen::VectorXd inv = row_slack(x).cwiseInverse();
      grad += con.inequality_matrix.transpose() * inv;
      hess += con.inequality_matrix.transpose() * inv.cwiseAbs2().asDiagonal() *
              con.inequality_matrix;
    }
    for (auto j : lower_index) {
      double s = x(j) - con.lower(j);
      grad(j) -= 1.0 / s;
      hess(j, j) += 1.0 / (s * s);
    }
    for (auto j : upper_index) {
      double s = con.upper(j) - x(j);
      grad(j) += 1.0 / s;
      hess(j, j) += 1.0 / (s * s);
    }
  }

  // Largest step in (0, 1] along dx keeping a fraction of every slack.
  double max_step(const Eigen::VectorXd& x, const Eigen::VectorXd& dx) const {
    double step = 1.0;
    const double keep = 0.99;
    if (con.inequality_matrix.rows() > 0) {
      Eigen::VectorXd s = row_slack(x);
      Eigen::VectorXd ds = -(con.inequality_matrix * dx);
      for (Eigen::Index i = 0; i < s.size(); ++i)
        if (ds(i) < 0.0) step = std::min(step, -keep * s(i) / ds(i));
    }
    for (auto j : lower_index)
      if (dx(j) < 0.0) step = std::min(step, -keep * (x(j) - con.lower(j)) / dx(j));
    for (auto j : upper_index)
      if (dx(j) > 0.0) step = std::min(step, keep * (con.upper(j) - x(j)) / dx(j));
    return step;
  }
};

// Orthonormal basis of the null space of E (identity when E has no rows).
Eigen::MatrixXd null_space(const Eigen::MatrixXd& e, Eigen::Index n) {
  if (e.rows() == 0) return Eigen::MatrixXd::Identity(n, n);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(e, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double cutoff = 1e-12 * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

}  // namespace

double min_slack(const LinearConstraints& constraints, const Eigen::VectorXd& x) {
  return BarrierTerms(constraints).min_slack(x);
}

Eigen::VectorXd find_interior_point(const LinearConstraints& con) {
  con.validate();
  const Eigen::Index n = con.num_variables();
  // Variables (x, delta): maximize delta with every slack >= delta, delta <= 1.
  LinearProgram lp;
  lp.objective = Eigen::VectorXd::Zero(n + 1);
  lp.objective(n) = -1.0;
  lp.constraints = LinearConstraints::free(n + 1);
  lp.constraints.upper(n) = 1.0;
  for (Eigen::Index i = 0; i < con.inequality_matrix.rows(); ++i) {
    Eigen::RowVectorXd row(n + 1);
    row << con.inequality_matrix.row(i), 1.0;
    lp.constraints.add_inequality(row, con.inequality_rhs(i));
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::isfinite(con.lower(j))) {
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n + 1);
      row(j) = -1.0;
      row(n) = 1.0;
      lp.constraints.add_inequality(row, -con.lower(j));
    }
    if (std::isfinite(con.upper(j))) {
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n + 1);
      row(j) = 1.0;
      row(n) = 1.0;
      lp.constraints.add_inequality(row, con.upper(j));
    }
  }
  for (Eigen::Index i = 0; i < con.equality_matrix.rows(); ++i) {
    Eigen::RowVectorXd row(n + 1);
    row << con.equality_matrix.row(i), 0.0;
    lp.constraints.add_equality(row, con.equality_rhs(i));
  }
  SolveReport r = simplex_solve(lp);
  if (r.status != SolveStatus::Optimal || !(r.x(n) > 1e-9))
    throw Error(ErrorCode::NoInteriorPoint, "constraints have no strictly feasible point");
  return r.x.head(n);
}

SolveReport barrier_minimize(const SmoothObjective& objective, const LinearConstraints& con,
                             const std::optional<Eigen::VectorXd>& start,
                             const BarrierOptions& options) {
  con.validate();
  if (!objective.value || !objective.gradient)
    throw Error(ErrorCode::InvalidArgument, "objective needs value and gradient callbacks");
  if (!(options.initial_weight > 0.0) || !(options.final_weight > 0.0) ||
      !(options.weight_factor > 0.0 && options.weight_factor < 1.0) ||
      options.final_weight > options.initial_weight)
    throw Error(ErrorCode::InvalidArgument, "invalid barrier weight schedule");

  const Eigen::Index n = con.num_variables();
  BarrierTerms terms(con);
  const Eigen::MatrixXd& eq = con.equality_matrix;

  auto equality_residual = [&](const Eigen::VectorXd& x) {
    return eq.rows() > 0 ? (eq * x - con.equality_rhs).cwiseAbs().maxCoeff() : 0.0;
  };

  Eigen::VectorXd x;
  if (start && start->size() == n && terms.min_slack(*start) > 0.0 &&
      equality_residual(*start) <= 1e-9 * (1.0 + start->cwiseAbs().maxCoeff()))
    x = *start;
  else
    x = find_interior_point(con);

  const Eigen::MatrixXd z = null_space(eq, n);
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> eq_solver;
  if (eq.rows() > 0) eq_solver.compute(eq);

  const bool exact_hessian = static_cast<bool>(objective.hessian);
  Eigen::MatrixXd model = Eigen::MatrixXd::Identity(n, n);
  bool model_scaled = false;

  SolveReport report;
  double mu = options.initial_weight;
  double projected = kInf;
  while (true) {
    auto phi = [&](const Eigen::VectorXd& y) {
      return objective.value(y) - mu * terms.log_sum(y);
    };
    Eigen::VectorXd fgrad = objective.gradient(x);
    for (int it = 0; it < options.max_newton_per_stage; ++it) {
      Eigen::VectorXd bgrad;
      Eigen::MatrixXd bhess;
      terms.derivatives(x, bgrad, bhess);
      Eigen::VectorXd grad = fgrad + mu * bgrad;
      Eigen::MatrixXd hess = (exact_hessian ? objective.hessian(x) : model) + mu * bhess;
      projected = (z.transpose() * grad).norm();

      // Newton step restricted to the equality null space, plus a minimum-norm
      // correction of any drift in the equalities.
      Eigen::VectorXd correction = Eigen::VectorXd::Zero(n);
      if (eq.rows() > 0) correction = -eq_solver.solve(eq * x - con.equality_rhs);
      Eigen::MatrixXd reduced = z.transpose() * hess * z;
      Eigen::VectorXd rhs = -(z.transpose() * (grad + hess * correction));
      Eigen::VectorXd dz;
      double shift = 0.0;
      for (int attempt = 0; attempt < 60; ++attempt) {
        Eigen::LDLT<Eigen::MatrixXd> ldlt(
            reduced + shift * Eigen::MatrixXd::Identity(reduced.rows(), reduced.cols()));
        if (ldlt.info() == Eigen::Success && ldlt.isPositive() &&
            (ldlt.vectorD().array() > 0.0).all()) {
          dz = ldlt.solve(rhs);
          if (dz.allFinite()) break;
        }
        shift = shift == 0.0 ? 1e-12 * std::max(1.0, reduced.diagonal().cwiseAbs().maxCoeff())
                             : shift * 10.0;
      }
      Eigen::VectorXd dx = correction + z * dz;
      // Measured on the null-space part; the drift correction is not a descent step.
      double decrement = -(z.transpose() * grad).dot(dz);
      bool last_stage = mu <= options.final_weight * (1.0 + 1e-12);
      double stage_tol = last_stage ? options.gradient_tolerance * 0.1 : options.gradient_tolerance;
      if (projected <= stage_tol || !(decrement > 0.0)) break;

      double step = terms.max_step(x, dx);
      double current = phi(x);
      Eigen::VectorXd trial;
      bool accepted = false;
      for (int k = 0; k < 80; ++k) {
        trial = x + step * dx;
        if (terms.min_slack(trial) > 0.0) {
          double value = phi(trial);
          // Near the minimizer the decrease drops below the rounding error of phi,
          // so a small-decrement step is accepted on feasibility alone.
          bool tiny = decrement <= 1e-9 * (1.0 + std::abs(current));
          if (std::isfinite(value) &&
              (value <= current - 1e-4 * step * decrement || (tiny && k == 0))) {
            accepted = true;
            break;
          }
        }
        step *= 0.5;
      }
      ++report.iterations;
      if (!accepted) break;

      Eigen::VectorXd new_fgrad = objective.gradient(trial);
      if (!exact_hessian) {
        Eigen::VectorXd s = trial - x;
        Eigen::VectorXd y = new_fgrad - fgrad;
        double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
          if (!model_scaled) {
            model = Eigen::MatrixXd::Identity(n, n) * (y.squaredNorm() / sy);
            model_scaled = true;
          }
          Eigen::VectorXd bs = model * s;
          model += (y * y.transpose()) / sy - (bs * bs.transpose()) / s.dot(bs);
        }
      }
      x = std::move(trial);
      fgrad = std::move(new_fgrad);
    }
    if (mu <= options.final_weight * (1.0 + 1e-12)) break;
    mu = std::max(options.final_weight, mu * options.weight_factor);
  }

  // Final certificate at the last barrier weight.
  Eigen::VectorXd bgrad;
  Eigen::MatrixXd bhess;
  terms.derivatives(x, bgrad, bhess);
  projected = (z.transpose() * (objective.gradient(x) + mu * bgrad)).norm();

  report.x = x;
  report.objective = objective.value(x);
  report.certificate = projected;
  report.status =
      projected < options.gradient_tolerance ? SolveStatus::Optimal : SolveStatus::MaxIterations;
  return report;
}

}  // namespace tollkit::optim
