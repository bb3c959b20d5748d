#pragma once

#include <span>
#include <vector>

#include "tollkit/arc_vector.hpp"
#include "tollkit/equilibrium.hpp"
#include "tollkit/network.hpp"

namespace tollkit {

struct SocialObjectiveValue {
  double total = 0.0;
  double latency_part = 0.0;  // sum_a w_a s_a(w_a)
  double entropy_part = 0.0;  // (1/beta) sum_i [sum w ln w - X ln X], X = node outflow
};

/// Perturbed total latency L(w). Throws Error(InfeasibleFlow) unless w lies in
/// the flow polytope within 1e-6.
SocialObjectiveValue perturbed_total_latency(const Network& net, const FlowVector& flow,
                                             double beta);

/// Same expression evaluated at any nonnegative vector, without the
/// conservation check (used for directional and finite-difference probes).
SocialObjectiveValue perturbed_total_latency_unchecked(const Network& net,
                                                       std::span<const double> flow, double beta);

inline constexpr double kInteriorFloor = 1e-12;

/// dL/dw_a = s_a + w_a s'_a + (1/beta) ln(w_a / X_{i_a}), with both logarithms
/// clamped at ln(floor).
std::vector<double> perturbed_total_latency_gradient(const Network& net,
                                                     std::span<const double> flow, double beta,
                                                     double floor = kInteriorFloor);

struct FrankWolfeOptions {
  double gap_tolerance = 1e-10;
  int max_iterations = 100'000;
  double interior_floor = kInteriorFloor;
};

struct FrankWolfeResult {
  FlowVector flow;
  double gap = 0.0;
  int iterations = 0;
};

/// Minimizes L over the flow polytope. The linear oracle is an all-or-nothing
/// assignment onto the cheapest route under the current gradient; mass is
/// moved from the most expensive route carrying flow (pairwise step), with an
/// exact line search. Stops when the Frank-Wolfe gap drops below tolerance;
/// throws NoConvergenceError otherwise.
FrankWolfeResult minimize_social_cost_direct(const Network& net, double beta,
                                             const FrankWolfeOptions& options = {});

/// Frank-Wolfe duality gap grad(w) . (w - v) with v the all-or-nothing vertex.
double frank_wolfe_gap(const Network& net, const FlowVector& flow, double beta,
                       double floor = kInteriorFloor);

struct MarginalTollOptions {
  double tolerance = 1e-10;
  int max_iterations = 10'000;
  double damping = 0.5;
  // Inner equilibrium tolerance is tolerance * inner_tolerance_ratio.
  double inner_tolerance_ratio = 1e-2;
};

struct MarginalToll {
  TollVector toll;   // p*
  FlowVector flow;   // equilibrium flow under p*
  double residual = 0.0;  // || p* - w (.) s'(w) ||_inf at that flow
  int iterations = 0;
};

/// Damped fixed-point iteration p <- (1 - gamma) p + gamma * w(p) (.) s'(w(p)).
MarginalToll solve_marginal_toll(const Network& net, double beta,
                                 const MarginalTollOptions& options = {});

/// w (.) s'(w), the toll each arc would need at flow w.
TollVector marginal_toll_at(const Network& net, const FlowVector& flow);

struct SocialOptimumReport {
  FrankWolfeResult direct;
  MarginalToll marginal;
  double max_flow_discrepancy = 0.0;  // || w_direct - w(p*) ||_inf
  double objective_gap = 0.0;         // L(w_direct) - L(w(p*))
};

SocialOptimumReport cross_validate_social_optimum(const Network& net, double beta,
                                                  const FrankWolfeOptions& fw = {},
                                                  const MarginalTollOptions& mt = {});

}  // namespace tollkit
