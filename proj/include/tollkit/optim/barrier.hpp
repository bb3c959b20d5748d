#pragma once

#include <functional>
#include <optional>

#include "tollkit/optim/linear_program.hpp"

namespace tollkit::optim {

/// A smooth convex objective. When `hessian` is empty the minimizer falls back
/// to a BFGS model of the objective's curvature (the barrier curvature is
/// always exact).
struct SmoothObjective {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> hessian;
};

struct BarrierOptions {
  double initial_weight = 1.0;
  double weight_factor = 0.1;
  double final_weight = 1e-8;
  double gradient_tolerance = 1e-6;
  int max_newton_per_stage = 200;
};

/// Log-barrier method: for each weight mu in initial_weight, *factor, ...,
/// final_weight, minimizes f(x) - mu * sum(log slack) by equality-constrained
/// Newton steps that keep every slack strictly positive. The certificate is the
/// norm of the barrier gradient projected onto the equality null space at the
/// final weight. When `start` is empty or not strictly feasible, an interior
/// point is found by an LP first; Error(NoInteriorPoint) if none exists.
SolveReport barrier_minimize(const SmoothObjective& objective, const LinearConstraints& constraints,
                             const std::optional<Eigen::VectorXd>& start = std::nullopt,
                             const BarrierOptions& options = {});

/// A point satisfying the equalities with every inequality and finite bound
/// strictly slack (maximizes the smallest slack, capped at 1).
Eigen::VectorXd find_interior_point(const LinearConstraints& constraints);

/// Smallest slack over inequality rows and finite bounds (+inf if none).
double min_slack(const LinearConstraints& constraints, const Eigen::VectorXd& x);

}  // namespace tollkit::optim
