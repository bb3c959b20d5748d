#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "tollkit/equity.hpp"
#include "tollkit/network.hpp"
#include "tollkit/network_io.hpp"
#include "tollkit/social_optimum.hpp"

namespace tollkit {

/// A named network with its logit parameter and the weight vectors to sweep.
struct Scenario {
  std::string name;
  std::string description;
  Network network;
  double beta = 0.5;
  std::vector<EquityWeights> sweep;
};

/// The weight grid used for the stand-in experiments.
std::vector<EquityWeights> default_sweep();

/// Stand-ins for the two experiment networks plus the micro-networks used in tests.
std::vector<Scenario> builtin_scenarios();

std::optional<Scenario> find_scenario(const std::string& name);

/// Throws Error(InvalidArgument) naming the known scenarios.
Scenario require_scenario(const std::string& name);

/// Converts a parsed file into a scenario; beta defaults to 0.5 and the sweep
/// to default_sweep() when the file omits them.
Scenario scenario_from_document(const NetworkDocument& doc);

NetworkDocument scenario_document(const Scenario& scenario);

struct ExperimentRow {
  std::string label;
  std::optional<EquityWeights> weights;  // empty for the marginal-toll row
  TollVector toll;
  NodePotentials potentials;
  ObjectiveValues objectives;
  double marginal_composite = 0.0;  // F_lambda at p*, for the dominance check
  EquityStatus status = EquityStatus::Optimal;
  double certificate = 0.0;
  bool feasible_shift = true;
  double flow_deviation = 0.0;  // || MTE(toll) - w* ||_inf
};

struct ExperimentReport {
  std::string scenario;
  double beta = 0.0;
  double demand = 0.0;
  FlowVector optimal_flow;   // w* from the direct minimization
  TollVector marginal_toll;  // p*
  double marginal_residual = 0.0;
  double flow_discrepancy = 0.0;  // || w*_direct - w(p*) ||_inf
  double objective_gap = 0.0;
  double social_cost = 0.0;  // L(w*)
  std::vector<ExperimentRow> rows;  // p* row first, then one per weight vector
};

struct ExperimentOptions {
  FrankWolfeOptions frank_wolfe;
  MarginalTollOptions marginal;
  EquityOptions equity;
  MteOptions mte;
};

ExperimentReport run_experiment(const Scenario& scenario, const ExperimentOptions& options = {});

std::string weights_label(const EquityWeights& weights);

}  // namespace tollkit
