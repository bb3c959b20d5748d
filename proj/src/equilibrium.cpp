#include "tollkit/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tollkit/error.hpp"
#include "tollkit/optim/line_search.hpp"

namespace tollkit {

namespace {

void check_inputs(const Network& net, const FlowVector& flow, const TollVector& toll,
                  double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw Error(ErrorCode::InvalidArgument, "beta must be positive and finite");
  if (flow.size() != net.num_arcs() || toll.size() != net.num_arcs())
    throw Error(ErrorCode::DimensionMismatch, "flow/toll size does not match arc count");
}

}  // namespace

CostToGo compute_cost_to_go(const Network& net, const FlowVector& flow, const TollVector& toll,
                            double beta) {
  check_inputs(net, flow, toll, beta);
  CostToGo out;
  out.beta = beta;
  out.arc_value.assign(net.num_arcs(), 0.0);
  out.node_value.assign(net.num_nodes(), 0.0);

  // Reverse topological order visits arcs in nondecreasing height, so every
  // arc leaving j_a is final before any arc entering j_a is evaluated.
  auto order = net.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    NodeIndex i = *it;
    auto outs = net.out_arcs(i);
    if (outs.empty()) continue;
    double lowest = std::numeric_limits<double>::infinity();
    for (ArcIndex a : outs) {
      const Arc& arc = net.arc(a);
      double z = arc.latency.value(flow[a]) + toll[a] + out.node_value[arc.head];
      if (!std::isfinite(z)) {
        std::ostringstream os;
        os << "cost-to-go of arc " << arc.id << " is not finite";
        throw Error(ErrorCode::NonFiniteCost, os.str());
      }
      out.arc_value[a] = z;
      lowest = std::min(lowest, z);
    }
    // -(1/beta) ln sum exp(-beta z) = zmin - (1/beta) ln sum exp(-beta (z - zmin))
    double sum = 0.0;
    for (ArcIndex a : outs) sum += std::exp(-beta * (out.arc_value[a] - lowest));
    out.node_value[i] = lowest - std::log(sum) / beta;
  }
  return out;
}

ChoiceProbabilities choice_probabilities(const Network& net, const CostToGo& cost) {
  ChoiceProbabilities out;
  out.arc_probability.assign(net.num_arcs(), 0.0);
  for (NodeIndex i = 0; i < net.num_nodes(); ++i) {
    auto outs = net.out_arcs(i);
    if (outs.empty()) continue;
    double lowest = std::numeric_limits<double>::infinity();
    for (ArcIndex a : outs) lowest = std::min(lowest, cost.arc_value[a]);
    double sum = 0.0;
    for (ArcIndex a : outs) {
      double e = std::exp(-cost.beta * (cost.arc_value[a] - lowest));
      out.arc_probability[a] = e;
      sum += e;
    }
    for (ArcIndex a : outs) out.arc_probability[a] /= sum;
  }
  return out;
}

FlowVector propagate_flows(const Network& net, const ChoiceProbabilities& probabilities) {
  FlowVector w(net.num_arcs());
  std::vector<double> throughput(net.num_nodes(), 0.0);
  throughput[net.origin()] = net.demand();
  for (NodeIndex i : net.topological_order()) {
    for (ArcIndex a : net.out_arcs(i)) {
      w[a] = throughput[i] * probabilities.arc_probability[a];
      throughput[net.arc(a).head] += w[a];
    }
  }
  return w;
}

namespace {

FlowVector logit_map(const Network& net, const FlowVector& flow, const TollVector& toll,
                     double beta) {
  return propagate_flows(net, choice_probabilities(net, compute_cost_to_go(net, flow, toll, beta)));
}

double sup_distance(const FlowVector& a, const FlowVector& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

// Derivative of the equilibrium potential at w + gamma d along d.
double potential_slope(const Network& net, const FlowVector& w, const FlowVector& d,
                       const TollVector& toll, double beta, double gamma) {
  std::vector<double> out_flow(net.num_nodes(), 0.0);
  FlowVector x(w.size());
  for (ArcIndex a = 0; a < w.size(); ++a) {
    x[a] = w[a] + gamma * d[a];
    out_flow[net.arc(a).tail] += x[a];
  }
  double slope = 0.0;
  for (ArcIndex a = 0; a < w.size(); ++a) {
    if (d[a] == 0.0) continue;
    const Arc& arc = net.arc(a);
    double entropy = x[a] > 0.0 ? std::log(x[a] / out_flow[arc.tail]) / beta
                                : -std::numeric_limits<double>::infinity();
    slope += d[a] * (arc.latency.value(x[a]) + toll[a] + entropy);
  }
  return slope;
}

}  // namespace

double mte_residual(const Network& net, const FlowVector& flow, const TollVector& toll,
                    double beta) {
  return sup_distance(logit_map(net, flow, toll, beta), flow);
}

MteResult solve_mte(const Network& net, const TollVector& toll, double beta,
                    const MteOptions& options) {
  if (!(options.tolerance > 0.0) || options.max_iterations <= 0 || !(options.damping > 0.0) ||
      options.damping > 1.0)
    throw Error(ErrorCode::InvalidArgument, "invalid MTE options");
  for (double p : toll)
    if (!(p >= 0.0)) throw Error(ErrorCode::NegativeToll, "tolls must be nonnegative");

  FlowVector w = options.initial_flow ? *options.initial_flow : uniform_split_flow(net);
  check_inputs(net, w, toll, beta);

  auto step = [](const FlowVector& from, const FlowVector& to, double g) {
    FlowVector x(from.size());
    for (std::size_t a = 0; a < x.size(); ++a) x[a] = (1.0 - g) * from[a] + g * to[a];
    return x;
  };

  double gamma = options.damping;
  FlowVector target = logit_map(net, w, toll, beta);
  double residual = sup_distance(target, w);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if (residual < options.tolerance) return {std::move(w), iter, residual, gamma};
    FlowVector trial = step(w, target, gamma);
    FlowVector trial_target = logit_map(net, trial, toll, beta);
    double trial_residual = sup_distance(trial_target, trial);
    if (!options.adaptive_damping && !options.line_search) {
      w = std::move(trial);
      target = std::move(trial_target);
      residual = trial_residual;
      continue;
    }
    if (trial_residual < residual) {
      w = std::move(trial);
      target = std::move(trial_target);
      residual = trial_residual;
      gamma = std::min(options.damping, 1.25 * gamma);
      continue;
    }
    gamma = std::max(options.min_damping, 0.5 * gamma);
    double g = gamma;
    if (options.line_search) {
      FlowVector d(w.size());
      for (std::size_t a = 0; a < w.size(); ++a) d[a] = target[a] - w[a];
      g = optim::minimize_convex_by_derivative(
          [&](double t) { return potential_slope(net, w, d, toll, beta, t); }, 0.0, 1.0, 80);
      if (!(g > 0.0)) g = options.min_damping;
    }
    w = step(w, target, g);
    target = logit_map(net, w, toll, beta);
    residual = sup_distance(target, w);
  }
  throw NoConvergenceError("MTE fixed-point iteration", options.max_iterations, residual);
}

}  // namespace tollkit
