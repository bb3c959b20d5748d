#include "tollkit/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "tollkit/social_optimum.hpp"

namespace tollkit {

namespace {

using nlohmann::ordered_json;

std::string fmt(double v, int width = 14) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%*.6f", width, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string arc_name(const Network& net, ArcIndex a) {
  const Arc& arc = net.arc(a);
  return net.node_name(arc.tail) + "->" + net.node_name(arc.head);
}

ordered_json to_json(std::span<const double> v) { return ordered_json(std::vector<double>(v.begin(), v.end())); }

ordered_json to_json(const ObjectiveValues& v) {
  return ordered_json{{"F1", v.revenue}, {"F2", v.max_cost}, {"F3", v.entropy},
                      {"composite", v.composite}};
}

ordered_json to_json(const EquityWeights& w) {
  return ordered_json::array({w.revenue, w.max_cost, w.entropy});
}

ordered_json network_json(const Network& net) {
  ordered_json arcs = ordered_json::array();
  for (const auto& arc : net.arcs())
    arcs.push_back({{"id", arc.id},
                    {"tail", net.node_name(arc.tail)},
                    {"head", net.node_name(arc.head)}});
  return ordered_json{{"origin", net.node_name(net.origin())},
                      {"destination", net.node_name(net.destination())},
                      {"demand", net.demand()},
                      {"arcs", arcs}};
}

ordered_json envelope(const char* kind) {
  return ordered_json{{"schema_version", kSchemaVersion}, {"kind", kind}};
}

ordered_json potentials_json(const Network& net, const NodePotentials& p) {
  ordered_json out = ordered_json::object();
  for (NodeIndex i = 0; i < net.num_nodes(); ++i) out[net.node_name(i)] = p.tau[i];
  return out;
}

double max_abs_diff(const FlowVector& a, const FlowVector& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

ValidationReport validate_report(const Network& net) {
  return ValidationReport{compute_heights(net), count_routes(net)};
}

MteReport mte_report(const Network& net, const TollVector& toll, double beta,
                     const std::string& toll_source, const MteOptions& options) {
  MteReport r;
  r.toll_source = toll_source;
  r.beta = beta;
  r.toll = toll;
  r.result = solve_mte(net, toll, beta, options);
  r.cost = compute_cost_to_go(net, r.result.flow, toll, beta);
  r.probabilities = choice_probabilities(net, r.cost);
  return r;
}

DesignReport design_report(const Network& net, double beta, const EquityWeights& weights,
                           const ExperimentOptions& options) {
  DesignReport r;
  r.beta = beta;
  r.weights = weights;
  FrankWolfeResult direct = minimize_social_cost_direct(net, beta, options.frank_wolfe);
  MarginalToll marginal = solve_marginal_toll(net, beta, options.marginal);
  r.optimal_flow = direct.flow;
  r.marginal_toll = marginal.toll;
  r.solution = solve_equity(net, r.optimal_flow, r.marginal_toll, weights, options.equity);
  MteResult mte = solve_mte(net, r.solution.toll, beta, options.mte);
  r.flow_deviation = max_abs_diff(mte.flow, r.optimal_flow);
  r.mte_residual = mte_residual(net, r.optimal_flow, r.solution.toll, beta);
  return r;
}

std::string validation_table(const Network& net, const ValidationReport& report) {
  std::ostringstream os;
  os << "network valid: " << net.num_nodes() << " nodes, " << net.num_arcs() << " arcs, origin "
     << net.node_name(net.origin()) << ", destination " << net.node_name(net.destination())
     << ", demand " << net.demand() << "\n";
  os << "height " << report.heights.network_height << ", routes " << report.route_count << "\n";
  os << "arc  link              height\n";
  for (ArcIndex a = 0; a < net.num_arcs(); ++a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%3d  %-16s %7d\n", net.arc(a).id, arc_name(net, a).c_str(),
                  report.heights.arc_height[a]);
    os << buf;
  }
  return os.str();
}

std::string validation_json(const Network& net, const ValidationReport& report) {
  ordered_json j = envelope("validate");
  j["valid"] = true;
  j["network"] = network_json(net);
  j["arc_height"] = report.heights.arc_height;
  j["network_height"] = report.heights.network_height;
  j["route_count"] = report.route_count;
  return j.dump(2) + "\n";
}

std::string mte_table(const Network& net, const MteReport& report) {
  std::ostringstream os;
  os << "MTE  beta=" << report.beta << "  toll=" << report.toll_source
     << "  iterations=" << report.result.iterations << "  residual=" << sci(report.result.residual)
     << "\n";
  os << "arc  link                      toll            flow    cost-to-go     prob\n";
  for (ArcIndex a = 0; a < net.num_arcs(); ++a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%3d  %-16s", net.arc(a).id, arc_name(net, a).c_str());
    os << buf << fmt(report.toll[a]) << fmt(report.result.flow[a]) << fmt(report.cost.arc_value[a])
       << fmt(report.probabilities.arc_probability[a], 9) << "\n";
  }
  return os.str();
}

std::string mte_json(const Network& net, const MteReport& report) {
  ordered_json j = envelope("mte");
  j["network"] = network_json(net);
  j["beta"] = report.beta;
  j["toll_source"] = report.toll_source;
  j["toll"] = to_json(report.toll.span());
  j["flow"] = to_json(report.result.flow.span());
  j["cost_to_go"] = report.cost.arc_value;
  j["node_value"] = report.cost.node_value;
  j["choice_probability"] = report.probabilities.arc_probability;
  j["iterations"] = report.result.iterations;
  j["residual"] = report.result.residual;
  return j.dump(2) + "\n";
}

std::string design_table(const Network& net, const DesignReport& report) {
  const auto& s = report.solution;
  std::ostringstream os;
  os << "design  lambda=" << weights_label(report.weights) << "  beta=" << report.beta
     << "  status=" << to_string(s.status) << "  certificate=" << sci(s.certificate) << "\n";
  os << "arc  link                        w*            p*        designed\n";
  for (ArcIndex a = 0; a < net.num_arcs(); ++a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%3d  %-16s", net.arc(a).id, arc_name(net, a).c_str());
    os << buf << fmt(report.optimal_flow[a]) << fmt(report.marginal_toll[a]) << fmt(s.toll[a])
       << "\n";
  }
  os << "node potentials:";
  for (NodeIndex i = 0; i < net.num_nodes(); ++i)
    os << ' ' << net.node_name(i) << '=' << s.potentials.tau[i];
  os << "\n";
  os << "            F1            F2            F3     F_lambda\n";
  os << "p*  " << fmt(s.marginal_objectives.revenue) << fmt(s.marginal_objectives.max_cost)
     << fmt(s.marginal_objectives.entropy) << fmt(s.marginal_objectives.composite) << "\n";
  os << "opt " << fmt(s.objectives.revenue) << fmt(s.objectives.max_cost)
     << fmt(s.objectives.entropy) << fmt(s.objectives.composite) << "\n";
  os << "equilibrium under designed toll: max |w - w*| = " << sci(report.flow_deviation)
     << ", residual at w* = " << sci(report.mte_residual) << "\n";
  return os.str();
}

std::string design_json(const Network& net, const DesignReport& report) {
  const auto& s = report.solution;
  ordered_json j = envelope("design");
  j["network"] = network_json(net);
  j["beta"] = report.beta;
  j["lambda"] = to_json(report.weights);
  j["status"] = to_string(s.status);
  j["certificate"] = s.certificate;
  j["iterations"] = s.iterations;
  j["optimal_flow"] = to_json(report.optimal_flow.span());
  j["marginal_toll"] = to_json(report.marginal_toll.span());
  j["potentials"] = potentials_json(net, s.potentials);
  j["toll"] = to_json(s.toll.span());
  j["objectives"] = to_json(s.objectives);
  j["marginal_objectives"] = to_json(s.marginal_objectives);
  j["flow_deviation"] = report.flow_deviation;
  j["mte_residual"] = report.mte_residual;
  return j.dump(2) + "\n";
}

std::string experiment_table(const Network& net, const ExperimentReport& report) {
  std::ostringstream os;
  os << "experiment " << report.scenario << "  beta=" << report.beta << "  demand=" << report.demand
     << "\n";
  os << "social optimum: L(w*)=" << fmt(report.social_cost, 0)
     << "  max |w*_direct - w(p*)|=" << sci(report.flow_discrepancy)
     << "  L gap=" << sci(report.objective_gap)
     << "  marginal residual=" << sci(report.marginal_residual) << "\n";
  os << "arc  link                        w*            p*\n";
  for (ArcIndex a = 0; a < net.num_arcs(); ++a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%3d  %-16s", net.arc(a).id, arc_name(net, a).c_str());
    os << buf << fmt(report.optimal_flow[a]) << fmt(report.marginal_toll[a]) << "\n";
  }
  os << "\nlambda                     F1            F2            F3   status     max|w-w*|\n";
  for (const auto& row : report.rows) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-16s", row.label.c_str());
    os << buf << fmt(row.objectives.revenue) << fmt(row.objectives.max_cost)
       << fmt(row.objectives.entropy) << "   " << (row.weights ? to_string(row.status) : "-")
       << "    " << sci(row.flow_deviation) << "\n";
  }
  return os.str();
}

std::string experiment_json(const Network& net, const ExperimentReport& report) {
  ordered_json j = envelope("experiment");
  j["scenario"] = report.scenario;
  j["network"] = network_json(net);
  j["beta"] = report.beta;
  j["optimal_flow"] = to_json(report.optimal_flow.span());
  j["marginal_toll"] = to_json(report.marginal_toll.span());
  j["marginal_residual"] = report.marginal_residual;
  j["flow_discrepancy"] = report.flow_discrepancy;
  j["objective_gap"] = report.objective_gap;
  j["social_cost"] = report.social_cost;
  ordered_json rows = ordered_json::array();
  for (const auto& row : report.rows) {
    ordered_json r{{"label", row.label}};
    r["lambda"] = row.weights ? to_json(*row.weights) : ordered_json(nullptr);
    r["toll"] = to_json(row.toll.span());
    r["potentials"] = potentials_json(net, row.potentials);
    r["objectives"] = to_json(row.objectives);
    if (row.weights) {
      r["marginal_composite"] = row.marginal_composite;
      r["status"] = to_string(row.status);
      r["certificate"] = row.certificate;
    }
    r["feasible_shift"] = row.feasible_shift;
    r["flow_deviation"] = row.flow_deviation;
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string experiment_plot_data(const Network& net, const ExperimentReport& report) {
  std::ostringstream os;
  os << "arc\tw_star\tp_star";
  for (const auto& row : report.rows)
    if (row.weights) os << "\tp" << row.label;
  os << "\n";
  char buf[64];
  for (ArcIndex a = 0; a < net.num_arcs(); ++a) {
    os << net.arc(a).id;
    std::snprintf(buf, sizeof buf, "\t%.12g\t%.12g", report.optimal_flow[a], report.marginal_toll[a]);
    os << buf;
    for (const auto& row : report.rows) {
      if (!row.weights) continue;
      std::snprintf(buf, sizeof buf, "\t%.12g", row.toll[a]);
      os << buf;
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace tollkit
