#include "tollkit/optim/simplex.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "tollkit/error.hpp"

namespace tollkit::optim {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::MaxIterations: return "max_iter";
  }
  return "unknown";
}

LinearConstraints LinearConstraints::nonnegative(Eigen::Index n) {
  LinearConstraints c = free(n);
  c.lower.setZero();
  return c;
}

LinearConstraints LinearConstraints::free(Eigen::Index n) {
  LinearConstraints c;
  c.inequality_matrix.resize(0, n);
  c.inequality_rhs.resize(0);
  c.equality_matrix.resize(0, n);
  c.equality_rhs.resize(0);
  c.lower = Eigen::VectorXd::Constant(n, -std::numeric_limits<double>::infinity());
  c.upper = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
  return c;
}

namespace {
void append_row(Eigen::MatrixXd& m, Eigen::VectorXd& rhs, const Eigen::RowVectorXd& row,
                double value) {
  if (row.size() != m.cols())
    throw Error(ErrorCode::DimensionMismatch, "constraint row has the wrong length");
  m.conservativeResize(m.rows() + 1, Eigen::NoChange);
  m.row(m.rows() - 1) = row;
  rhs.conservativeResize(rhs.size() + 1);
  rhs(rhs.size() - 1) = value;
}
}  // namespace

void LinearConstraints::add_inequality(const Eigen::RowVectorXd& row, double rhs) {
  append_row(inequality_matrix, inequality_rhs, row, rhs);
}

void LinearConstraints::add_equality(const Eigen::RowVectorXd& row, double rhs) {
  append_row(equality_matrix, equality_rhs, row, rhs);
}

void LinearConstraints::validate() const {
  const Eigen::Index n = lower.size();
  if (upper.size() != n || inequality_matrix.cols() != n || equality_matrix.cols() != n ||
      inequality_matrix.rows() != inequality_rhs.size() ||
      equality_matrix.rows() != equality_rhs.size())
    throw Error(ErrorCode::DimensionMismatch, "linear constraint dimensions are inconsistent");
  if (!inequality_matrix.allFinite() || !inequality_rhs.allFinite() ||
      !equality_matrix.allFinite() || !equality_rhs.allFinite())
    throw Error(ErrorCode::InvalidArgument, "linear constraints contain non-finite entries");
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::isnan(lower(j)) || std::isnan(upper(j)) || lower(j) > upper(j) ||
        lower(j) == std::numeric_limits<double>::infinity() ||
        upper(j) == -std::numeric_limits<double>::infinity())
      throw Error(ErrorCode::InvalidArgument, "invalid variable bounds");
  }
}

double LinearConstraints::max_violation(const Eigen::VectorXd& x) const {
  double worst = 0.0;
  if (inequality_matrix.rows() > 0)
    worst = std::max(worst, (inequality_matrix * x - inequality_rhs).maxCoeff());
  if (equality_matrix.rows() > 0)
    worst = std::max(worst, (equality_matrix * x - equality_rhs).cwiseAbs().maxCoeff());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    worst = std::max(worst, lower(j) - x(j));
    worst = std::max(worst, x(j) - upper(j));
  }
  return worst;
}

namespace {

// How an original variable maps onto nonnegative standard-form columns.
struct ColumnMap {
  enum Kind { Shift, Mirror, Split } kind;
  Eigen::Index column;
  double offset;  // lower bound for Shift, upper bound for Mirror
};

class Tableau {
 public:
  Tableau(Eigen::MatrixXd table, std::vector<Eigen::Index> basis, double tolerance)
      : t_(std::move(table)), basis_(std::move(basis)), tol_(tolerance) {}

  Eigen::Index rows() const { return t_.rows() - 1; }
  Eigen::Index rhs_col() const { return t_.cols() - 1; }
  Eigen::MatrixXd& table() { return t_; }
  std::vector<Eigen::Index>& basis() { return basis_; }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t_.row(r) /= t_(r, c);
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i == r) continue;
      double factor = t_(i, c);
      if (factor != 0.0) t_.row(i) -= factor * t_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  // Runs Bland's rule over columns [0, allowed). Returns Optimal, Unbounded
  // or MaxIterations.
  SolveStatus run(Eigen::Index allowed, int& iterations, int max_iterations) {
    const Eigen::Index obj = rows();
    while (true) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < allowed; ++j) {
        if (t_(obj, j) < -tol_) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return SolveStatus::Optimal;
      if (iterations >= max_iterations) return SolveStatus::MaxIterations;

      Eigen::Index leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < obj; ++i) {
        double a = t_(i, enter);
        if (a <= kPivotTolerance) continue;
        double ratio = t_(i, rhs_col()) / a;
        bool better = ratio < best_ratio - kRatioTieTolerance;
        bool tie = !better && ratio <= best_ratio + kRatioTieTolerance;
        if (better || (tie && basis_[static_cast<std::size_t>(i)] <
                                  basis_[static_cast<std::size_t>(leave)])) {
          if (better) best_ratio = ratio;
          leave = i;
        }
      }
      if (leave < 0) return SolveStatus::Unbounded;
      pivot(leave, enter);
      ++iterations;
    }
  }

  static constexpr double kPivotTolerance = 1e-11;
  static constexpr double kRatioTieTolerance = 1e-12;

 private:
  Eigen::MatrixXd t_;
  std::vector<Eigen::Index> basis_;
  double tol_;
};

}  // namespace

SolveReport simplex_solve(const LinearProgram& lp, const SimplexOptions& options) {
  const LinearConstraints& con = lp.constraints;
  con.validate();
  const Eigen::Index n = con.num_variables();
  if (lp.objective.size() != n)
    throw Error(ErrorCode::DimensionMismatch, "objective length does not match variable count");
  if (!lp.objective.allFinite())
    throw Error(ErrorCode::InvalidArgument, "objective contains non-finite entries");

  // Map original variables to nonnegative columns y.
  std::vector<ColumnMap> map;
  Eigen::Index ny = 0;
  struct BoundRow {
    Eigen::Index column;
    double width;
  };
  std::vector<BoundRow> bound_rows;
  for (Eigen::Index j = 0; j < n; ++j) {
    bool lo = std::isfinite(con.lower(j));
    bool hi = std::isfinite(con.upper(j));
    if (lo) {
      map.push_back({ColumnMap::Shift, ny, con.lower(j)});
      if (hi) bound_rows.push_back({ny, con.upper(j) - con.lower(j)});
      ny += 1;
    } else if (hi) {
      map.push_back({ColumnMap::Mirror, ny, con.upper(j)});
      ny += 1;
    } else {
      map.push_back({ColumnMap::Split, ny, 0.0});
      ny += 2;
    }
  }

  // Translate a row over x into a row over y plus an rhs correction.
  auto translate = [&](const Eigen::RowVectorXd& row, double rhs, Eigen::RowVectorXd& out,
                       double& out_rhs) {
    out = Eigen::RowVectorXd::Zero(ny);
    out_rhs = rhs;
    for (Eigen::Index j = 0; j < n; ++j) {
      double a = row(j);
      if (a == 0.0) continue;
      const ColumnMap& cm = map[static_cast<std::size_t>(j)];
      switch (cm.kind) {
        case ColumnMap::Shift:
          out(cm.column) += a;
          out_rhs -= a * cm.offset;
          break;
        case ColumnMap::Mirror:
          out(cm.column) -= a;
          out_rhs -= a * cm.offset;
          break;
        case ColumnMap::Split:
          out(cm.column) += a;
          out(cm.column + 1) -= a;
          break;
      }
    }
  };

  struct Row {
    Eigen::RowVectorXd coef;
    double rhs;
    bool inequality;
  };
  std::vector<Row> rows;
  for (Eigen::Index i = 0; i < con.inequality_matrix.rows(); ++i) {
    Row r{{}, 0.0, true};
    translate(con.inequality_matrix.row(i), con.inequality_rhs(i), r.coef, r.rhs);
    rows.push_back(std::move(r));
  }
  for (const auto& b : bound_rows) {
    Row r{Eigen::RowVectorXd::Zero(ny), b.width, true};
    r.coef(b.column) = 1.0;
    rows.push_back(std::move(r));
  }
  for (Eigen::Index i = 0; i < con.equality_matrix.rows(); ++i) {
    Row r{{}, 0.0, false};
    translate(con.equality_matrix.row(i), con.equality_rhs(i), r.coef, r.rhs);
    rows.push_back(std::move(r));
  }

  const Eigen::Index m = static_cast<Eigen::Index>(rows.size());
  Eigen::Index ns = 0;
  for (const auto& r : rows) ns += r.inequality ? 1 : 0;
  const Eigen::Index art0 = ny + ns;
  const Eigen::Index cols = art0 + m + 1;

  Eigen::RowVectorXd cy = Eigen::RowVectorXd::Zero(ny);
  for (Eigen::Index j = 0; j < n; ++j) {
    const ColumnMap& cm = map[static_cast<std::size_t>(j)];
    double c = lp.objective(j);
    switch (cm.kind) {
      case ColumnMap::Shift:
        cy(cm.column) += c;
        break;
      case ColumnMap::Mirror:
        cy(cm.column) -= c;
        break;
      case ColumnMap::Split:
        cy(cm.column) += c;
        cy(cm.column + 1) -= c;
        break;
    }
  }

  SolveReport report;
  report.x = Eigen::VectorXd::Zero(n);
  auto recover = [&](const Eigen::VectorXd& y) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const ColumnMap& cm = map[static_cast<std::size_t>(j)];
      switch (cm.kind) {
        case ColumnMap::Shift: report.x(j) = cm.offset + y(cm.column); break;
        case ColumnMap::Mirror: report.x(j) = cm.offset - y(cm.column); break;
        case ColumnMap::Split: report.x(j) = y(cm.column) - y(cm.column + 1); break;
      }
    }
    report.objective = lp.objective.dot(report.x);
  };

  if (m == 0) {
    // Only sign constraints on y: optimal at y = 0 unless some cost is negative.
    Eigen::VectorXd y = Eigen::VectorXd::Zero(ny);
    report.status = (ny > 0 && cy.minCoeff() < -options.tolerance) ? SolveStatus::Unbounded
                                                                  : SolveStatus::Optimal;
    report.certificate = ny > 0 ? cy.minCoeff() : 0.0;
    recover(y);
    return report;
  }

  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(m + 1, cols);
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  Eigen::Index slack = ny;
  double rhs_scale = 1.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const Row& r = rows[static_cast<std::size_t>(i)];
    table.row(i).head(ny) = r.coef;
    if (r.inequality) table(i, slack++) = 1.0;
    table(i, cols - 1) = r.rhs;
    if (r.rhs < 0.0) table.row(i) *= -1.0;
    table(i, art0 + i) = 1.0;
    basis[static_cast<std::size_t>(i)] = art0 + i;
    rhs_scale = std::max(rhs_scale, std::abs(r.rhs));
  }
  // Phase I objective: sum of artificials, expressed in reduced form.
  for (Eigen::Index i = 0; i < m; ++i) table.row(m) -= table.row(i);
  for (Eigen::Index i = 0; i < m; ++i) table(m, art0 + i) = 0.0;

  Tableau phase1(std::move(table), std::move(basis), options.tolerance);
  int iterations = 0;
  SolveStatus status = phase1.run(art0, iterations, options.max_iterations);
  report.iterations = iterations;
  if (status == SolveStatus::MaxIterations) {
    report.status = status;
    return report;
  }
  double infeasibility = -phase1.table()(m, cols - 1);
  if (infeasibility > options.tolerance * rhs_scale * 10.0) {
    report.status = SolveStatus::Infeasible;
    report.certificate = infeasibility;
    return report;
  }

  // Drive artificials out of the basis; rows where that is impossible are
  // redundant and dropped.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (phase1.basis()[static_cast<std::size_t>(i)] < art0) {
      keep.push_back(i);
      continue;
    }
    Eigen::Index col = -1;
    for (Eigen::Index j = 0; j < art0; ++j) {
      if (std::abs(phase1.table()(i, j)) > Tableau::kPivotTolerance * 1e3) {
        col = j;
        break;
      }
    }
    if (col >= 0) {
      phase1.pivot(i, col);
      keep.push_back(i);
    }
  }

  const Eigen::Index m2 = static_cast<Eigen::Index>(keep.size());
  Eigen::MatrixXd table2 = Eigen::MatrixXd::Zero(m2 + 1, art0 + 1);
  std::vector<Eigen::Index> basis2(static_cast<std::size_t>(m2));
  for (Eigen::Index k = 0; k < m2; ++k) {
    Eigen::Index i = keep[static_cast<std::size_t>(k)];
    table2.row(k).head(art0) = phase1.table().row(i).head(art0);
    table2(k, art0) = phase1.table()(i, cols - 1);
    basis2[static_cast<std::size_t>(k)] = phase1.basis()[static_cast<std::size_t>(i)];
  }
  table2.row(m2).head(ny) = cy;
  for (Eigen::Index k = 0; k < m2; ++k) {
    Eigen::Index b = basis2[static_cast<std::size_t>(k)];
    double cb = b < ny ? cy(b) : 0.0;
    if (cb != 0.0) table2.row(m2) -= cb * table2.row(k);
  }

  Tableau phase2(std::move(table2), std::move(basis2), options.tolerance);
  status = phase2.run(art0, iterations, options.max_iterations);
  report.iterations = iterations;
  report.status = status;

  Eigen::VectorXd y = Eigen::VectorXd::Zero(art0);
  for (Eigen::Index k = 0; k < m2; ++k)
    y(phase2.basis()[static_cast<std::size_t>(k)]) = phase2.table()(k, art0);
  recover(y.head(ny));
  report.certificate = art0 > 0 ? phase2.table().row(m2).head(art0).minCoeff() : 0.0;
  return report;
}

}  // namespace tollkit::optim
