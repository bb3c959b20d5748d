#pragma once

#include <Eigen/Dense>

namespace tollkit::optim {

/// Linear constraints A_ub x <= b_ub, A_eq x = b_eq, lower <= x <= upper.
/// Bounds may be infinite.
struct LinearConstraints {
  Eigen::MatrixXd inequality_matrix;
  Eigen::VectorXd inequality_rhs;
  Eigen::MatrixXd equality_matrix;
  Eigen::VectorXd equality_rhs;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  /// No rows; every variable bounded below by zero.
  static LinearConstraints nonnegative(Eigen::Index num_variables);
  /// No rows; every variable free.
  static LinearConstraints free(Eigen::Index num_variables);

  Eigen::Index num_variables() const noexcept { return lower.size(); }

  void add_inequality(const Eigen::RowVectorXd& row, double rhs);
  void add_equality(const Eigen::RowVectorXd& row, double rhs);

  /// Throws Error(DimensionMismatch) or Error(InvalidArgument) (non-finite entries).
  void validate() const;

  /// Largest violation of any constraint at x.
  double max_violation(const Eigen::VectorXd& x) const;
};

/// minimize objective . x subject to constraints.
struct LinearProgram {
  Eigen::VectorXd objective;
  LinearConstraints constraints;
};

enum class SolveStatus {
  Optimal,
  Infeasible,
  Unbounded,
  MaxIterations,
};

const char* to_string(SolveStatus status);

struct SolveReport {
  SolveStatus status = SolveStatus::MaxIterations;
  Eigen::VectorXd x;
  double objective = 0.0;
  // Simplex: smallest reduced cost at termination (>= -tol when optimal).
  // Barrier: norm of the projected gradient at the final barrier weight.
  double certificate = 0.0;
  int iterations = 0;
};

}  // namespace tollkit::optim
