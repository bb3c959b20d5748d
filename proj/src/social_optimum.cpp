#include "tollkit/social_optimum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tollkit/error.hpp"
#include "tollkit/optim/line_search.hpp"

namespace tollkit {

namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

void require_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw Error(ErrorCode::InvalidArgument, "beta must be positive and finite");
}

void require_size(const Network& net, std::size_t n) {
  if (n != net.num_arcs())
    throw Error(ErrorCode::DimensionMismatch, "vector size does not match arc count");
}

// Cheapest (or dearest) route under per-arc weights. Arcs with allowed[a] == 0
// are skipped. Returns the route's arcs in origin-to-destination order.
Route extreme_route(const Network& net, std::span<const double> weight, bool cheapest,
                    const std::vector<char>* allowed, double& value) {
  const double none = cheapest ? std::numeric_limits<double>::infinity()
                               : -std::numeric_limits<double>::infinity();
  std::vector<double> best(net.num_nodes(), none);
  std::vector<ArcIndex> choice(net.num_nodes(), 0);
  best[net.destination()] = 0.0;
  auto order = net.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    NodeIndex i = *it;
    for (ArcIndex a : net.out_arcs(i)) {
      if (allowed && !(*allowed)[a]) continue;
      double downstream = best[net.arc(a).head];
      if (!std::isfinite(downstream)) continue;
      double v = weight[a] + downstream;
      if (cheapest ? v < best[i] : v > best[i]) {
        best[i] = v;
        choice[i] = a;
      }
    }
  }
  value = best[net.origin()];
  Route route;
  if (!std::isfinite(value)) return route;
  for (NodeIndex i = net.origin(); i != net.destination(); i = net.arc(choice[i]).head)
    route.push_back(choice[i]);
  return route;
}

}  // namespace

SocialObjectiveValue perturbed_total_latency_unchecked(const Network& net,
                                                       std::span<const double> flow,
                                                       double beta) {
  require_beta(beta);
  require_size(net, flow.size());
  SocialObjectiveValue out;
  for (ArcIndex a = 0; a < net.num_arcs(); ++a)
    out.latency_part += flow[a] * net.arc(a).latency.value(flow[a]);
  double entropy = 0.0;
  for (NodeIndex i = 0; i < net.num_nodes(); ++i) {
    if (i == net.destination()) continue;
    double outflow = 0.0;
    for (ArcIndex a : net.out_arcs(i)) {
      entropy += xlogx(flow[a]);
      outflow += flow[a];
    }
    entropy -= xlogx(outflow);
  }
  out.entropy_part = entropy / beta;
  out.total = out.latency_part + out.entropy_part;
  return out;
}

SocialObjectiveValue perturbed_total_latency(const Network& net, const FlowVector& flow,
                                             double beta) {
  auto check = check_flow_feasibility(net, flow.span(), 1e-6);
  if (!check.feasible) {
    std::ostringstream os;
    os << "flow violates conservation/nonnegativity by " << check.max_violation;
    throw Error(ErrorCode::InfeasibleFlow, os.str());
  }
  return perturbed_total_latency_unchecked(net, flow.span(), beta);
}

std::vector<double> perturbed_total_latency_gradient(const Network& net,
                                                     std::span<const double> flow, double beta,
                                                     double floor) {
  require_beta(beta);
  require_size(net, flow.size());
  const double log_floor = std::log(floor);
  std::vector<double> outflow(net.num_nodes(), 0.0);
  for (ArcIndex a = 0; a < net.num_arcs(); ++a) outflow[net.arc(a).tail] += flow[a];
  std::vector<double> grad(net.num_arcs());
  for (ArcIndex a = 0; a < net.num_arcs(); ++a) {
    const Arc& arc = net.arc(a);
    double w = flow[a];
    double log_w = w > floor ? std::log(w) : log_floor;
    double x = outflow[arc.tail];
    double log_x = x > floor ? std::log(x) : log_floor;
    grad[a] = arc.latency.value(w) + w * arc.latency.slope(w) + (log_w - log_x) / beta;
  }
  return grad;
}

double frank_wolfe_gap(const Network& net, const FlowVector& flow, double beta, double floor) {
  auto grad = perturbed_total_latency_gradient(net, flow.span(), beta, floor);
  double shortest = 0.0;
  extreme_route(net, grad, true, nullptr, shortest);
  double dot = 0.0;
  for (ArcIndex a = 0; a < net.num_arcs(); ++a) dot += grad[a] * flow[a];
  return dot - net.demand() * shortest;
}

FrankWolfeResult minimize_social_cost_direct(const Network& net, double beta,
                                             const FrankWolfeOptions& options) {
  require_beta(beta);
  if (!(options.gap_tolerance > 0.0) || options.max_iterations <= 0)
    throw Error(ErrorCode::InvalidArgument, "invalid Frank-Wolfe options");

  const double demand = net.demand();
  const std::size_t m = net.num_arcs();
  FrankWolfeResult result;
  result.flow = uniform_split_flow(net);
  FlowVector& w = result.flow;

  std::vector<double> direction(m);
  std::vector<double> probe(m);
  std::vector<char> support(m);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    auto grad = perturbed_total_latency_gradient(net, w.span(), beta, options.interior_floor);
    double shortest = 0.0;
    Route toward = extreme_route(net, grad, true, nullptr, shortest);
    double dot = 0.0;
    for (std::size_t a = 0; a < m; ++a) dot += grad[a] * w[a];
    result.gap = dot - demand * shortest;
    result.iterations = iter;
    if (result.gap < options.gap_tolerance || demand == 0.0) return result;

    for (std::size_t a = 0; a < m; ++a) support[a] = w[a] > 0.0 ? 1 : 0;
    double longest = 0.0;
    Route away = extreme_route(net, grad, false, &support, longest);
    if (away.empty() || longest - shortest <= 0.0) break;

    // Move a fraction gamma of the demand from `away` onto `toward`.
    std::fill(direction.begin(), direction.end(), 0.0);
    for (ArcIndex a : toward) direction[a] += demand;
    for (ArcIndex a : away) direction[a] -= demand;
    double max_step = std::numeric_limits<double>::infinity();
    for (ArcIndex a : away)
      if (direction[a] < 0.0) max_step = std::min(max_step, w[a] / -direction[a]);
    if (!std::isfinite(max_step) || max_step <= 0.0) break;

    auto slope = [&](double gamma) {
      for (std::size_t a = 0; a < m; ++a) probe[a] = std::max(0.0, w[a] + gamma * direction[a]);
      auto g = perturbed_total_latency_gradient(net, probe, beta, options.interior_floor);
      double s = 0.0;
      for (std::size_t a = 0; a < m; ++a) s += g[a] * direction[a];
      return s;
    };
    double gamma = optim::minimize_convex_by_derivative(slope, 0.0, max_step);
    if (gamma <= 0.0) break;
    for (std::size_t a = 0; a < m; ++a) w[a] = std::max(0.0, w[a] + gamma * direction[a]);
    if (gamma == max_step) {
      // A full pairwise step empties the bottleneck arc(s) of the away route.
      for (ArcIndex a : away)
        if (direction[a] < 0.0 && w[a] <= 1e-15 * demand) w[a] = 0.0;
    }
  }
  throw NoConvergenceError("Frank-Wolfe (gap " + std::to_string(result.gap) + ")",
                           result.iterations, result.gap);
}

TollVector marginal_toll_at(const Network& net, const FlowVector& flow) {
  require_size(net, flow.size());
  TollVector p(net.num_arcs());
  for (ArcIndex a = 0; a < net.num_arcs(); ++a)
    p[a] = flow[a] * net.arc(a).latency.slope(flow[a]);
  return p;
}

MarginalToll solve_marginal_toll(const Network& net, double beta,
                                 const MarginalTollOptions& options) {
  require_beta(beta);
  if (!(options.tolerance > 0.0) || options.max_iterations <= 0 || !(options.damping > 0.0) ||
      options.damping > 1.0)
    throw Error(ErrorCode::InvalidArgument, "invalid marginal-toll options");

  MteOptions inner;
  inner.tolerance = options.tolerance * options.inner_tolerance_ratio;
  inner.max_iterations = 100'000;

  const double gamma = options.damping;
  TollVector p(net.num_arcs());
  double step = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    MteResult eq = solve_mte(net, p, beta, inner);
    TollVector target = marginal_toll_at(net, eq.flow);
    step = 0.0;
    for (ArcIndex a = 0; a < net.num_arcs(); ++a) {
      double next = (1.0 - gamma) * p[a] + gamma * target[a];
      step = std::max(step, std::abs(next - p[a]));
      p[a] = next;
    }
    inner.initial_flow = std::move(eq.flow);
    if (step < options.tolerance) {
      MarginalToll out;
      out.toll = p;
      out.flow = solve_mte(net, p, beta, inner).flow;
      TollVector implied = marginal_toll_at(net, out.flow);
      for (ArcIndex a = 0; a < net.num_arcs(); ++a)
        out.residual = std::max(out.residual, std::abs(implied[a] - p[a]));
      out.iterations = iter + 1;
      return out;
    }
  }
  throw NoConvergenceError("marginal-toll fixed-point iteration", options.max_iterations, step);
}

SocialOptimumReport cross_validate_social_optimum(const Network& net, double beta,
                                                  const FrankWolfeOptions& fw,
                                                  const MarginalTollOptions& mt) {
  SocialOptimumReport report;
  report.direct = minimize_social_cost_direct(net, beta, fw);
  report.marginal = solve_marginal_toll(net, beta, mt);
  for (ArcIndex a = 0; a < net.num_arcs(); ++a)
    report.max_flow_discrepancy =
        std::max(report.max_flow_discrepancy,
                 std::abs(report.direct.flow[a] - report.marginal.flow[a]));
  report.objective_gap = perturbed_total_latency(net, report.direct.flow, beta).total -
                         perturbed_total_latency(net, report.marginal.flow, beta).total;
  return report;
}

}  // namespace tollkit
