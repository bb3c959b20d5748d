#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tollkit/arc_vector.hpp"
#include "tollkit/network.hpp"
#include "tollkit/optim/barrier.hpp"
#include "tollkit/optim/linear_program.hpp"
#include "tollkit/optim/simplex.hpp"

namespace tollkit {

/// Node potentials tau, one per node, with tau at the destination fixed to 0.
struct NodePotentials {
  std::vector<double> tau;
};

NodePotentials zero_potentials(const Network& net);

/// Nonnegative weights on (revenue, max-cost, toll entropy), not all zero.
struct EquityWeights {
  double revenue = 1.0;
  double max_cost = 0.0;
  double entropy = 0.0;

  /// Throws Error(InvalidArgument) on negative, non-finite or all-zero weights.
  static EquityWeights make(double revenue, double max_cost, double entropy);

  std::array<double, 3> as_array() const { return {revenue, max_cost, entropy}; }
  friend bool operator==(const EquityWeights&, const EquityWeights&) = default;
};

/// p_a = p*_a + tau_{i_a} - tau_{j_a}; may be negative. Throws
/// Error(InvalidArgument) unless tau_d == 0 and sizes match.
std::vector<double> shift_toll(const TollVector& marginal, const NodePotentials& potentials,
                               const Network& net);

/// True iff every shifted toll is >= -tol.
bool is_feasible_shift(const TollVector& marginal, const NodePotentials& potentials,
                       const Network& net, double tol = 0.0);

/// F1: total revenue sum_a w_a p_a.
double objective_min_revenue(const FlowVector& flow, std::span<const double> toll);

/// F2: costliest route under s_a(w_a) + p_a, by longest path on the DAG.
double objective_min_max(const Network& net, const FlowVector& flow, std::span<const double> toll);

/// F2 by scanning an explicit route list.
double objective_min_max_by_routes(const Network& net, const RouteSet& routes,
                                   const FlowVector& flow, std::span<const double> toll);

/// F3: sum_r T_r ln(T_r / S) + ||p||^2 with T_r the route toll totals and
/// S = sum_r T_r; 0 ln 0 = 0 and the entropy sum is 0 when S = 0.
double objective_toll_entropy(const Network& net, const RouteSet& routes,
                              std::span<const double> toll);

inline constexpr double kRouteTollFloor = 1e-12;

/// dF3/dp_a = sum_{r ∋ a} ln(T_r / S) + 2 p_a, route totals clamped at the floor.
std::vector<double> toll_entropy_gradient(const Network& net, const RouteSet& routes,
                                          std::span<const double> toll);

Eigen::MatrixXd toll_entropy_hessian(const Network& net, const RouteSet& routes,
                                     std::span<const double> toll);

struct ObjectiveValues {
  double revenue = 0.0;    // F1
  double max_cost = 0.0;   // F2
  double entropy = 0.0;    // F3
  double composite = 0.0;  // F_lambda
};

ObjectiveValues evaluate_objectives(const Network& net, const RouteSet& routes,
                                    const FlowVector& flow, std::span<const double> toll,
                                    const EquityWeights& weights);

double composite_objective(const Network& net, const RouteSet& routes, const FlowVector& flow,
                           std::span<const double> toll, const EquityWeights& weights);

double combine_objectives(const EquityWeights& weights, double revenue, double max_cost,
                          double entropy);

enum class EquityFormulation {
  CompactDp,  // node potentials m with m_i >= c_a + p_a + m_j
  PerRoute,   // one epigraph constraint per route
};

/// The equity toll-design program over shifts of the marginal toll.
///
/// Variables are tau (nodes other than d), the tolls p, and, when the max-cost
/// weight is positive, the epigraph scalar t with either node potentials m or
/// per-route slacks. Every inequality is written as a sign bound on a toll or
/// a slack variable, linked by equalities:
///   p_a - tau_{i_a} + tau_{j_a} = p*_a,      p_a >= 0
///   p_a + m_{j_a} - m_{i_a} + sigma_a = -s_a(w*_a),  sigma_a >= 0   (compact)
///   m_o - t + sigma_t = 0,                   sigma_t >= 0            (compact)
///   sum_{a in r} p_a - t + sigma_r = -sum_{a in r} s_a(w*_a)         (per route)
/// The linear part of the objective is lambda1 * w* . p + lambda2 * t.
struct EquityProgram {
  EquityWeights weights;
  EquityFormulation formulation = EquityFormulation::CompactDp;
  optim::LinearProgram lp;
  std::vector<Eigen::Index> tau_index;        // per node; -1 for the destination
  std::vector<Eigen::Index> toll_index;       // per arc
  Eigen::Index epigraph_index = -1;           // t, or -1 when unused
  std::vector<Eigen::Index> potential_index;  // m per node; -1 when unused
  Eigen::VectorXd interior_start;             // strictly feasible point (tau = 0)

  bool is_linear() const noexcept { return weights.entropy == 0.0; }
  Eigen::Index num_variables() const noexcept { return lp.objective.size(); }
  NodePotentials potentials(const Eigen::VectorXd& x) const;
};

EquityProgram build_equity_program(const Network& net, const RouteSet& routes,
                                   const FlowVector& optimal_flow, const TollVector& marginal,
                                   const EquityWeights& weights,
                                   EquityFormulation formulation = EquityFormulation::CompactDp);

enum class EquityStatus {
  Optimal,
  MaxIterations,
  Infeasible,
};

const char* to_string(EquityStatus status);

struct EquitySolution {
  NodePotentials potentials;
  TollVector toll;
  ObjectiveValues objectives;
  ObjectiveValues marginal_objectives;  // same objectives at p*
  EquityStatus status = EquityStatus::Infeasible;
  double certificate = 0.0;
  int iterations = 0;
  double epigraph = 0.0;  // optimal t when the max-cost weight is positive
  double program_objective = 0.0;
};

struct EquityOptions {
  EquityFormulation formulation = EquityFormulation::CompactDp;
  optim::SimplexOptions simplex;
  optim::BarrierOptions barrier;
  std::size_t route_cap = kDefaultRouteCap;
  // Shifted tolls in [-tol, 0) are reported as 0.
  double feasibility_tolerance = 1e-9;
};

/// Minimizes F_lambda(w*, p) over the shifted-toll polytope: simplex when the
/// entropy weight is 0, log-barrier Newton otherwise.
EquitySolution solve_equity(const Network& net, const FlowVector& optimal_flow,
                            const TollVector& marginal, const EquityWeights& weights,
                            const EquityOptions& options = {});

EquitySolution solve_equity(const Network& net, const RouteSet& routes,
                            const FlowVector& optimal_flow, const TollVector& marginal,
                            const EquityWeights& weights, const EquityOptions& options = {});

}  // namespace tollkit
