#pragma once

#include <optional>
#include <vector>

#include "tollkit/arc_vector.hpp"
#include "tollkit/network.hpp"

namespace tollkit {

/// Expected cost-to-go under the logit arc-choice model.
struct CostToGo {
  std::vector<double> arc_value;   // z_a
  std::vector<double> node_value;  // -(1/beta) ln sum_{a in out(i)} exp(-beta z_a); 0 at d
  double beta = 0.0;
};

/// Backward pass from the destination. Throws Error(NonFiniteCost) if any
/// value overflows, Error(DimensionMismatch) on size errors and
/// Error(InvalidArgument) for beta <= 0.
CostToGo compute_cost_to_go(const Network& net, const FlowVector& flow, const TollVector& toll,
                            double beta);

/// Per-arc probability of being chosen at its tail node.
struct ChoiceProbabilities {
  std::vector<double> arc_probability;
};

ChoiceProbabilities choice_probabilities(const Network& net, const CostToGo& cost);

/// Forward pass in topological order: node throughput times choice probability.
FlowVector propagate_flows(const Network& net, const ChoiceProbabilities& probabilities);

struct MteOptions {
  double tolerance = 1e-10;
  int max_iterations = 10'000;
  double damping = 0.5;
  // A damped step is kept when it lowers the self-map residual; otherwise the
  // damping halves and the step falls back to minimizing the equilibrium
  // potential (latency integrals plus arc-form entropy) along the logit
  // direction. Successful steps grow the damping back toward `damping`.
  bool adaptive_damping = true;
  bool line_search = true;
  double min_damping = 1e-6;
  std::optional<FlowVector> initial_flow;
};

struct MteResult {
  FlowVector flow;
  int iterations = 0;
  double residual = 0.0;
  double final_damping = 0.0;
};

/// Markovian traffic equilibrium for a fixed toll. Throws NoConvergenceError.
MteResult solve_mte(const Network& net, const TollVector& toll, double beta,
                    const MteOptions& options = {});

/// Sup-norm distance between a flow and its image under the logit map.
double mte_residual(const Network& net, const FlowVector& flow, const TollVector& toll,
                    double beta);

}  // namespace tollkit
