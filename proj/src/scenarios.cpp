#include "tollkit/scenarios.hpp"

#include <cstdio>
#include <sstream>

#include "tollkit/equilibrium.hpp"
#include "tollkit/error.hpp"

namespace tollkit {

namespace {

struct ArcRow {
  int id;
  const char* tail;
  const char* head;
  double theta1;
  double theta0;
};

Network make_network(const std::vector<std::string>& nodes, const std::vector<ArcRow>& rows,
                     const std::string& origin, const std::string& destination, double demand) {
  std::vector<ArcSpec> arcs;
  for (const auto& r : rows)
    arcs.push_back(ArcSpec{r.id, r.tail, r.head, LatencyFunction::affine(r.theta1, r.theta0)});
  return build_network(nodes, arcs, origin, destination, demand);
}

Scenario sioux_falls_stand_in() {
  // Reconstructed layered topology; the arc parameters follow the published table.
  Network net = make_network({"o", "n1", "n2", "n3", "n4", "d"},
                             {{1, "o", "n1", 7.26, 0.014},
                              {2, "o", "n2", 7.24, 0.008},
                              {3, "n1", "n3", 11.00, 0.013},
                              {4, "n2", "n3", 10.80, 0.005},
                              {5, "n1", "n2", 3.68, 0.006},
                              {6, "n3", "n4", 7.17, 0.011},
                              {7, "n3", "d", 3.66, 0.010},
                              {8, "n4", "d", 14.34, 0.009},
                              {9, "n2", "n4", 10.88, 0.008},
                              {10, "o", "n3", 14.37, 0.011}},
                             "o", "d", 10.0);
  return Scenario{"sioux-falls-stand-in",
                  "10-arc Sioux Falls subnetwork stand-in (topology reconstructed, not from the "
                  "original figures)",
                  std::move(net), 0.5, default_sweep()};
}

Scenario atlanta_stand_in() {
  Network net = make_network({"o", "n1", "n2", "d"},
                             {{1, "o", "n1", 2.0, 4.0},
                              {2, "o", "n2", 1.0, 2.0},
                              {3, "n1", "n2", 0.5, 2.0},
                              {4, "n1", "d", 1.5, 2.0},
                              {5, "n2", "d", 2.5, 6.0},
                              {6, "o", "d", 3.0, 4.0}},
                             "o", "d", 10.0);
  return Scenario{"atlanta-stand-in",
                  "6-arc downtown Atlanta stand-in (topology reconstructed, not from the original "
                  "figures)",
                  std::move(net), 0.5, default_sweep()};
}

}  // namespace

std::vector<EquityWeights> default_sweep() {
  return {EquityWeights{1.0, 0.0, 0.0}, EquityWeights{0.0, 1.0, 0.0},
          EquityWeights{0.7, 0.0, 0.3}, EquityWeights{0.0, 0.7, 0.3},
          EquityWeights{0.5, 0.3, 0.2}};
}

std::vector<Scenario> builtin_scenarios() {
  std::vector<Scenario> out;
  out.push_back(sioux_falls_stand_in());
  out.push_back(atlanta_stand_in());
  out.push_back(Scenario{"single-arc", "one arc from origin to destination",
                         make_network({"o", "d"}, {{1, "o", "d", 1.0, 1.0}}, "o", "d", 10.0), 0.5,
                         default_sweep()});
  out.push_back(Scenario{
      "parallel-identical", "two identical parallel arcs",
      make_network({"o", "d"}, {{1, "o", "d", 1.0, 1.0}, {2, "o", "d", 1.0, 1.0}}, "o", "d", 10.0),
      0.5, default_sweep()});
  out.push_back(Scenario{
      "parallel-asymmetric", "two parallel arcs with latencies w+1 and 2w+1",
      make_network({"o", "d"}, {{1, "o", "d", 1.0, 1.0}, {2, "o", "d", 2.0, 1.0}}, "o", "d", 1.0),
      1.0, default_sweep()});
  out.push_back(Scenario{"diamond", "5-arc diamond with a cross arc between the two middle nodes",
                         make_network({"o", "m1", "m2", "d"},
                                      {{1, "o", "m1", 1.0, 2.0},
                                       {2, "o", "m2", 2.0, 1.0},
                                       {3, "m1", "m2", 0.5, 1.0},
                                       {4, "m1", "d", 1.5, 1.0},
                                       {5, "m2", "d", 1.0, 3.0}},
                                      "o", "d", 10.0),
                         0.5, default_sweep()});
  return out;
}

std::optional<Scenario> find_scenario(const std::string& name) {
  for (auto& s : builtin_scenarios())
    if (s.name == name) return s;
  return std::nullopt;
}

Scenario require_scenario(const std::string& name) {
  if (auto s = find_scenario(name)) return *s;
  std::ostringstream os;
  os << "unknown scenario '" << name << "'; known:";
  for (const auto& s : builtin_scenarios()) os << ' ' << s.name;
  throw Error(ErrorCode::InvalidArgument, os.str());
}

Scenario scenario_from_document(const NetworkDocument& doc) {
  Scenario s{doc.name, doc.description, doc.network, doc.beta.value_or(0.5), {}};
  if (!(s.beta > 0.0)) throw Error(ErrorCode::InvalidArgument, "beta must be positive");
  if (doc.sweep.empty()) {
    s.sweep = default_sweep();
  } else {
    for (const auto& l : doc.sweep) s.sweep.push_back(EquityWeights::make(l[0], l[1], l[2]));
  }
  return s;
}

NetworkDocument scenario_document(const Scenario& scenario) {
  NetworkDocument doc{scenario.network, scenario.name, scenario.description, scenario.beta, {}};
  for (const auto& w : scenario.sweep) doc.sweep.push_back(w.as_array());
  return doc;
}

std::string weights_label(const EquityWeights& weights) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%g,%g,%g)", weights.revenue, weights.max_cost,
                weights.entropy);
  return buf;
}

ExperimentReport run_experiment(const Scenario& scenario, const ExperimentOptions& options) {
  const Network& net = scenario.network;
  ExperimentReport report;
  report.scenario = scenario.name;
  report.beta = scenario.beta;
  report.demand = net.demand();

  SocialOptimumReport social =
      cross_validate_social_optimum(net, scenario.beta, options.frank_wolfe, options.marginal);
  report.optimal_flow = social.direct.flow;
  report.marginal_toll = social.marginal.toll;
  report.marginal_residual = social.marginal.residual;
  report.flow_discrepancy = social.max_flow_discrepancy;
  report.objective_gap = social.objective_gap;
  report.social_cost = perturbed_total_latency(net, report.optimal_flow, scenario.beta).total;

  RouteSet routes = enumerate_routes(net, options.equity.route_cap);
  const FlowVector& w = report.optimal_flow;

  auto deviation = [&](const TollVector& toll) {
    MteResult mte = solve_mte(net, toll, scenario.beta, options.mte);
    double dev = 0.0;
    for (std::size_t a = 0; a < w.size(); ++a)
      dev = std::max(dev, std::abs(mte.flow[a] - w[a]));
    return dev;
  };

  ExperimentRow base;
  base.label = "p*";
  base.toll = report.marginal_toll;
  base.potentials = zero_potentials(net);
  base.objectives = evaluate_objectives(net, routes, w, base.toll.span(), EquityWeights{});
  base.objectives.composite = 0.0;
  base.flow_deviation = deviation(base.toll);
  report.rows.push_back(std::move(base));

  for (const auto& weights : scenario.sweep) {
    EquitySolution sol = solve_equity(net, routes, w, report.marginal_toll, weights, options.equity);
    ExperimentRow row;
    row.label = weights_label(weights);
    row.weights = weights;
    row.toll = sol.toll;
    row.potentials = sol.potentials;
    row.objectives = sol.objectives;
    row.marginal_composite = sol.marginal_objectives.composite;
    row.status = sol.status;
    row.certificate = sol.certificate;
    row.feasible_shift = is_feasible_shift(report.marginal_toll, sol.potentials, net,
                                           options.equity.feasibility_tolerance);
    row.flow_deviation = deviation(sol.toll);
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace tollkit
