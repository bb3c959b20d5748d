#include "tollkit/equity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tollkit/error.hpp"

namespace tollkit {

NodePotentials zero_potentials(const Network& net) {
  return NodePotentials{std::vector<double>(net.num_nodes(), 0.0)};
}

EquityWeights EquityWeights::make(double revenue, double max_cost, double entropy) {
  for (double v : {revenue, max_cost, entropy}) {
    if (!std::isfinite(v) || v < 0.0)
      throw Error(ErrorCode::InvalidArgument, "equity weights must be finite and nonnegative");
  }
  if (revenue == 0.0 && max_cost == 0.0 && entropy == 0.0)
    throw Error(ErrorCode::InvalidArgument, "equity weights must not all be zero");
  return EquityWeights{revenue, max_cost, entropy};
}

std::vector<double> shift_toll(const TollVector& marginal, const NodePotentials& potentials,
                               const Network& net) {
  if (marginal.size() != net.num_arcs() || potentials.tau.size() != net.num_nodes())
    throw Error(ErrorCode::DimensionMismatch, "toll/potential sizes do not match the network");
  if (potentials.tau[net.destination()] != 0.0)
    throw Error(ErrorCode::InvalidArgument, "potential at the destination must be 0");
  std::vector<double> p(net.num_arcs());
  for (ArcIndex a = 0; a < net.num_arcs(); ++a) {
    const Arc& arc = net.arc(a);
    p[a] = marginal[a] + potentials.tau[arc.tail] - potentials.tau[arc.head];
  }
  return p;
}

bool is_feasible_shift(const TollVector& marginal, const NodePotentials& potentials,
                       const Network& net, double tol) {
  auto p = shift_toll(marginal, potentials, net);
  return std::all_of(p.begin(), p.end(), [tol](double v) { return v >= -tol; });
}

double objective_min_revenue(const FlowVector& flow, std::span<const double> toll) {
  if (flow.size() != toll.size())
    throw Error(ErrorCode::DimensionMismatch, "flow and toll sizes differ");
  double total = 0.0;
  for (std::size_t a = 0; a < toll.size(); ++a) total += flow[a] * toll[a];
  return total;
}

double objective_min_max(const Network& net, const FlowVector& flow,
                         std::span<const double> toll) {
  if (flow.size() != net.num_arcs() || toll.size() != net.num_arcs())
    throw Error(ErrorCode::DimensionMismatch, "flow/toll sizes do not match arc count");
  std::vector<double> longest(net.num_nodes(), -std::numeric_limits<double>::infinity());
  longest[net.destination()] = 0.0;
  auto order = net.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    for (ArcIndex a : net.out_arcs(*it)) {
      const Arc& arc = net.arc(a);
      longest[*it] = std::max(longest[*it],
                              arc.latency.value(flow[a]) + toll[a] + longest[arc.head]);
    }
  }
  return longest[net.origin()];
}

double objective_min_max_by_routes(const Network& net, const RouteSet& routes,
                                   const FlowVector& flow, std::span<const double> toll) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& route : routes.routes) {
    double cost = 0.0;
    for (ArcIndex a : route) cost += net.arc(a).latency.value(flow[a]) + toll[a];
    worst = std::max(worst, cost);
  }
  return worst;
}

namespace {

std::vector<double> route_totals(const RouteSet& routes, std::span<const double> toll) {
  std::vector<double> totals;
  totals.reserve(routes.size());
  for (const auto& route : routes.routes) {
    double t = 0.0;
    for (ArcIndex a : route) t += toll[a];
    totals.push_back(t);
  }
  return totals;
}

void require_arc_size(const Network& net, std::size_t n) {
  if (n != net.num_arcs())
    throw Error(ErrorCode::DimensionMismatch, "toll size does not match arc count");
}

}  // namespace

double objective_toll_entropy(const Network& net, const RouteSet& routes,
                              std::span<const double> toll) {
  require_arc_size(net, toll.size());
  auto totals = route_totals(routes, toll);
  double sum = 0.0;
  for (double t : totals) sum += t;
  double entropy = 0.0;
  if (sum > 0.0) {
    for (double t : totals)
      if (t > 0.0) entropy += t * std::log(t / sum);
  }
  double norm2 = 0.0;
  for (double p : toll) norm2 += p * p;
  return entropy + norm2;
}

std::vector<double> toll_entropy_gradient(const Network& net, const RouteSet& routes,
                                          std::span<const double> toll) {
  require_arc_size(net, toll.size());
  auto totals = route_totals(routes, toll);
  double sum = 0.0;
  for (double t : totals) sum += t;
  std::vector<double> grad(net.num_arcs());
  for (ArcIndex a = 0; a < net.num_arcs(); ++a) grad[a] = 2.0 * toll[a];
  if (sum > 0.0) {
    for (std::size_t r = 0; r < routes.size(); ++r) {
      double g = std::log(std::max(totals[r], kRouteTollFloor) / sum);
      for (ArcIndex a : routes.routes[r]) grad[a] += g;
    }
  }
  return grad;
}

Eigen::MatrixXd toll_entropy_hessian(const Network& net, const RouteSet& routes,
                                     std::span<const double> toll) {
  require_arc_size(net, toll.size());
  const Eigen::Index m = static_cast<Eigen::Index>(net.num_arcs());
  Eigen::MatrixXd hess = 2.0 * Eigen::MatrixXd::Identity(m, m);
  auto totals = route_totals(routes, toll);
  double sum = 0.0;
  for (double t : totals) sum += t;
  if (!(sum > 0.0)) return hess;
  // R^T (diag(1/T) - 1 1^T / S) R with R the route-arc incidence matrix.
  Eigen::VectorXd usage = Eigen::VectorXd::Zero(m);
  for (std::size_t r = 0; r < routes.size(); ++r) {
    double inv = 1.0 / std::max(totals[r], kRouteTollFloor);
    for (ArcIndex a : routes.routes[r]) {
      usage(static_cast<Eigen::Index>(a)) += 1.0;
      for (ArcIndex b : routes.routes[r])
        hess(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) += inv;
    }
  }
  hess -= usage * usage.transpose() / sum;
  return hess;
}

double combine_objectives(const EquityWeights& weights, double revenue, double max_cost,
                          double entropy) {
  // Skip zero-weight terms so an unused objective never contributes 0 * inf.
  double total = 0.0;
  if (weights.revenue != 0.0) total += weights.revenue * revenue;
  if (weights.max_cost != 0.0) total += weights.max_cost * max_cost;
  if (weights.entropy != 0.0) total += weights.entropy * entropy;
  return total;
}

ObjectiveValues evaluate_objectives(const Network& net, const RouteSet& routes,
                                    const FlowVector& flow, std::span<const double> toll,
                                    const EquityWeights& weights) {
  ObjectiveValues v;
  v.revenue = objective_min_revenue(flow, toll);
  v.max_cost = objective_min_max(net, flow, toll);
  v.entropy = objective_toll_entropy(net, routes, toll);
  v.composite = combine_objectives(weights, v.revenue, v.max_cost, v.entropy);
  return v;
}

double composite_objective(const Network& net, const RouteSet& routes, const FlowVector& flow,
                           std::span<const double> toll, const EquityWeights& weights) {
  return evaluate_objectives(net, routes, flow, toll, weights).composite;
}

NodePotentials EquityProgram::potentials(const Eigen::VectorXd& x) const {
  NodePotentials out{std::vector<double>(tau_index.size(), 0.0)};
  for (std::size_t i = 0; i < tau_index.size(); ++i)
    if (tau_index[i] >= 0) out.tau[i] = x(tau_index[i]);
  return out;
}

EquityProgram build_equity_program(const Network& net, const RouteSet& routes,
                                   const FlowVector& optimal_flow, const TollVector& marginal,
                                   const EquityWeights& weights, EquityFormulation formulation) {
  if (optimal_flow.size() != net.num_arcs() || marginal.size() != net.num_arcs())
    throw Error(ErrorCode::DimensionMismatch, "flow/toll sizes do not match arc count");
  EquityWeights checked = EquityWeights::make(weights.revenue, weights.max_cost, weights.entropy);

  EquityProgram prog;
  prog.weights = checked;
  prog.formulation = formulation;
  const std::size_t num_nodes = net.num_nodes();
  const std::size_t num_arcs = net.num_arcs();
  const NodeIndex dest = net.destination();
  const bool epigraph = checked.max_cost > 0.0;
  const bool compact = formulation == EquityFormulation::CompactDp;

  Eigen::Index next = 0;
  prog.tau_index.assign(num_nodes, -1);
  for (NodeIndex i = 0; i < num_nodes; ++i)
    if (i != dest) prog.tau_index[i] = next++;
  prog.toll_index.resize(num_arcs);
  for (ArcIndex a = 0; a < num_arcs; ++a) prog.toll_index[a] = next++;
  prog.potential_index.assign(num_nodes, -1);
  std::vector<Eigen::Index> arc_slack(num_arcs, -1);
  std::vector<Eigen::Index> route_slack;
  Eigen::Index epigraph_slack = -1;
  if (epigraph) {
    prog.epigraph_index = next++;
    if (compact) {
      for (NodeIndex i = 0; i < num_nodes; ++i)
        if (i != dest) prog.potential_index[i] = next++;
      for (ArcIndex a = 0; a < num_arcs; ++a) arc_slack[a] = next++;
      epigraph_slack = next++;
    } else {
      for (std::size_t r = 0; r < routes.size(); ++r) route_slack.push_back(next++);
    }
  }
  const Eigen::Index n = next;

  prog.lp.objective = Eigen::VectorXd::Zero(n);
  prog.lp.constraints = optim::LinearConstraints::free(n);
  auto& con = prog.lp.constraints;
  for (ArcIndex a = 0; a < num_arcs; ++a) {
    con.lower(prog.toll_index[a]) = 0.0;
    prog.lp.objective(prog.toll_index[a]) = checked.revenue * optimal_flow[a];
  }

  std::vector<double> latency(num_arcs);
  for (ArcIndex a = 0; a < num_arcs; ++a)
    latency[a] = net.arc(a).latency.value(optimal_flow[a]);

  // Toll shift: p_a - tau_i + tau_j = p*_a.
  for (ArcIndex a = 0; a < num_arcs; ++a) {
    const Arc& arc = net.arc(a);
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n);
    row(prog.toll_index[a]) = 1.0;
    row(prog.tau_index[arc.tail]) -= 1.0;
    if (arc.head != dest) row(prog.tau_index[arc.head]) += 1.0;
    con.add_equality(row, marginal[a]);
  }

  Eigen::VectorXd start = Eigen::VectorXd::Zero(n);
  for (ArcIndex a = 0; a < num_arcs; ++a) start(prog.toll_index[a]) = marginal[a];

  if (epigraph) {
    prog.lp.objective(prog.epigraph_index) = checked.max_cost;
    if (compact) {
      for (ArcIndex a = 0; a < num_arcs; ++a) {
        const Arc& arc = net.arc(a);
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n);
        row(prog.toll_index[a]) = 1.0;
        if (arc.head != dest) row(prog.potential_index[arc.head]) += 1.0;
        row(prog.potential_index[arc.tail]) -= 1.0;
        row(arc_slack[a]) = 1.0;
        con.add_equality(row, -latency[a]);
        con.lower(arc_slack[a]) = 0.0;
      }
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n);
      row(prog.potential_index[net.origin()]) = 1.0;
      row(prog.epigraph_index) = -1.0;
      row(epigraph_slack) = 1.0;
      con.add_equality(row, 0.0);
      con.lower(epigraph_slack) = 0.0;

      // Start: m = longest remaining cost plus the node's height, so every
      // arc constraint has slack of at least one.
      HeightMap heights = compute_heights(net);
      std::vector<double> node_height(num_nodes, 0.0);
      std::vector<double> potential(num_nodes, 0.0);
      auto order = net.topological_order();
      for (auto it = order.rbegin(); it != order.rend(); ++it) {
        NodeIndex i = *it;
        if (i == dest) continue;
        double best = -std::numeric_limits<double>::infinity();
        for (ArcIndex a : net.out_arcs(i)) {
          node_height[i] = std::max(node_height[i], static_cast<double>(heights.arc_height[a]));
          best = std::max(best, latency[a] + marginal[a] + potential[net.arc(a).head]);
        }
        potential[i] = best;
      }
      for (NodeIndex i = 0; i < num_nodes; ++i) {
        if (i == dest) continue;
        start(prog.potential_index[i]) = potential[i] + node_height[i];
      }
      auto m_at = [&](NodeIndex i) { return i == dest ? 0.0 : start(prog.potential_index[i]); };
      for (ArcIndex a = 0; a < num_arcs; ++a) {
        const Arc& arc = net.arc(a);
        start(arc_slack[a]) = m_at(arc.tail) - m_at(arc.head) - latency[a] - marginal[a];
      }
      start(prog.epigraph_index) = m_at(net.origin()) + 1.0;
      start(epigraph_slack) = 1.0;
    } else {
      double worst = -std::numeric_limits<double>::infinity();
      std::vector<double> route_cost(routes.size(), 0.0);
      for (std::size_t r = 0; r < routes.size(); ++r) {
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n);
        double latency_sum = 0.0;
        for (ArcIndex a : routes.routes[r]) {
          row(prog.toll_index[a]) += 1.0;
          latency_sum += latency[a];
          route_cost[r] += latency[a] + marginal[a];
        }
        row(prog.epigraph_index) = -1.0;
        row(route_slack[r]) = 1.0;
        con.add_equality(row, -latency_sum);
        con.lower(route_slack[r]) = 0.0;
        worst = std::max(worst, route_cost[r]);
      }
      start(prog.epigraph_index) = worst + 1.0;
      for (std::size_t r = 0; r < routes.size(); ++r)
        start(route_slack[r]) = worst + 1.0 - route_cost[r];
    }
  }
  prog.interior_start = std::move(start);
  return prog;
}

const char* to_string(EquityStatus status) {
  switch (status) {
    case EquityStatus::Optimal: return "optimal";
    case EquityStatus::MaxIterations: return "max_iter";
    case EquityStatus::Infeasible: return "infeasible";
  }
  return "unknown";
}

EquitySolution solve_equity(const Network& net, const FlowVector& optimal_flow,
                            const TollVector& marginal, const EquityWeights& weights,
                            const EquityOptions& options) {
  return solve_equity(net, enumerate_routes(net, options.route_cap), optimal_flow, marginal,
                      weights, options);
}

EquitySolution solve_equity(const Network& net, const RouteSet& routes,
                            const FlowVector& optimal_flow, const TollVector& marginal,
                            const EquityWeights& weights, const EquityOptions& options) {
  for (double p : marginal)
    if (!(p >= 0.0)) throw Error(ErrorCode::NegativeToll, "marginal toll must be nonnegative");
  EquityProgram prog =
      build_equity_program(net, routes, optimal_flow, marginal, weights, options.formulation);

  optim::SolveReport report;
  if (prog.is_linear()) {
    report = optim::simplex_solve(prog.lp, options.simplex);
  } else {
    const Eigen::VectorXd linear = prog.lp.objective;
    const double lambda3 = prog.weights.entropy;
    auto tolls_of = [&prog](const Eigen::VectorXd& x) {
      std::vector<double> p(prog.toll_index.size());
      for (std::size_t a = 0; a < p.size(); ++a) p[a] = x(prog.toll_index[a]);
      return p;
    };
    optim::SmoothObjective objective;
    objective.value = [&, linear, lambda3](const Eigen::VectorXd& x) {
      return linear.dot(x) + lambda3 * objective_toll_entropy(net, routes, tolls_of(x));
    };
    objective.gradient = [&, linear, lambda3](const Eigen::VectorXd& x) {
      Eigen::VectorXd g = linear;
      auto ge = toll_entropy_gradient(net, routes, tolls_of(x));
      for (std::size_t a = 0; a < ge.size(); ++a) g(prog.toll_index[a]) += lambda3 * ge[a];
      return g;
    };
    objective.hessian = [&, lambda3](const Eigen::VectorXd& x) {
      const Eigen::Index n = x.size();
      Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
      Eigen::MatrixXd he = toll_entropy_hessian(net, routes, tolls_of(x));
      for (std::size_t a = 0; a < prog.toll_index.size(); ++a)
        for (std::size_t b = 0; b < prog.toll_index.size(); ++b)
          h(prog.toll_index[a], prog.toll_index[b]) =
              lambda3 * he(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      return h;
    };
    report = optim::barrier_minimize(objective, prog.lp.constraints, prog.interior_start,
                                     options.barrier);
  }

  EquitySolution sol;
  sol.iterations = report.iterations;
  sol.certificate = report.certificate;
  sol.marginal_objectives =
      evaluate_objectives(net, routes, optimal_flow, marginal.span(), prog.weights);

  bool usable = report.status == optim::SolveStatus::Optimal ||
                report.status == optim::SolveStatus::MaxIterations;
  if (!usable) {
    sol.status = EquityStatus::Infeasible;
    sol.potentials = zero_potentials(net);
    sol.toll = marginal;
    sol.objectives = sol.marginal_objectives;
    return sol;
  }
  sol.status = report.status == optim::SolveStatus::Optimal ? EquityStatus::Optimal
                                                           : EquityStatus::MaxIterations;
  sol.potentials = prog.potentials(report.x);
  sol.program_objective = report.objective;
  if (prog.epigraph_index >= 0) sol.epigraph = report.x(prog.epigraph_index);
  auto shifted = shift_toll(marginal, sol.potentials, net);
  for (double& p : shifted) {
    if (p < -options.feasibility_tolerance) {
      std::ostringstream os;
      os << "solver returned a shifted toll of " << p;
      throw Error(ErrorCode::Infeasible, os.str());
    }
    p = std::max(p, 0.0);
  }
  sol.toll = TollVector(std::move(shifted));
  sol.objectives = evaluate_objectives(net, routes, optimal_flow, sol.toll.span(), prog.weights);
  return sol;
}

}  // namespace tollkit
