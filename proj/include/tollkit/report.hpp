#pragma once

#include <string>

#include "tollkit/equilibrium.hpp"
#include "tollkit/equity.hpp"
#include "tollkit/network.hpp"
#include "tollkit/scenarios.hpp"

namespace tollkit {

inline constexpr int kSchemaVersion = 1;

struct ValidationReport {
  HeightMap heights;
  double route_count = 0.0;
};

ValidationReport validate_report(const Network& net);

struct MteReport {
  std::string toll_source;
  double beta = 0.0;
  TollVector toll;
  MteResult result;
  CostToGo cost;
  ChoiceProbabilities probabilities;
};

MteReport mte_report(const Network& net, const TollVector& toll, double beta,
                     const std::string& toll_source, const MteOptions& options = {});

struct DesignReport {
  double beta = 0.0;
  EquityWeights weights;
  FlowVector optimal_flow;
  TollVector marginal_toll;
  EquitySolution solution;
  double flow_deviation = 0.0;  // || MTE(designed toll) - w* ||_inf
  double mte_residual = 0.0;    // residual of the logit map at w* under the designed toll
};

DesignReport design_report(const Network& net, double beta, const EquityWeights& weights,
                           const ExperimentOptions& options = {});

std::string validation_table(const Network& net, const ValidationReport& report);
std::string validation_json(const Network& net, const ValidationReport& report);

std::string mte_table(const Network& net, const MteReport& report);
std::string mte_json(const Network& net, const MteReport& report);

std::string design_table(const Network& net, const DesignReport& report);
std::string design_json(const Network& net, const DesignReport& report);

std::string experiment_table(const Network& net, const ExperimentReport& report);
std::string experiment_json(const Network& net, const ExperimentReport& report);

/// Tab-separated columns: arc id, w*, p*, then the designed toll for each weight vector.
std::string experiment_plot_data(const Network& net, const ExperimentReport& report);

}  // namespace tollkit
