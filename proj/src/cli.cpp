#include "tollkit/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tollkit/error.hpp"
#include "tollkit/network_io.hpp"
#include "tollkit/report.hpp"
#include "tollkit/scenarios.hpp"
#include "tollkit/social_optimum.hpp"

namespace tollkit {

namespace {

Scenario load_input(const RunConfig& cfg) {
  if (!cfg.input_path.empty() && !cfg.scenario.empty())
    throw Error(ErrorCode::InvalidArgument, "give either an input file or --scenario, not both");
  Scenario s;
  if (!cfg.scenario.empty()) {
    s = require_scenario(cfg.scenario);
  } else if (!cfg.input_path.empty()) {
    s = scenario_from_document(load_network_document(cfg.input_path));
    if (s.name.empty()) s.name = std::filesystem::path(cfg.input_path).stem().string();
  } else {
    throw Error(ErrorCode::InvalidArgument, "an input file or --scenario is required");
  }
  if (cfg.beta) {
    if (!(*cfg.beta > 0.0) || !std::isfinite(*cfg.beta))
      throw Error(ErrorCode::InvalidArgument, "--beta must be positive");
    s.beta = *cfg.beta;
  }
  return s;
}

ExperimentOptions experiment_options(const RunConfig& cfg) {
  ExperimentOptions o;
  if (cfg.tolerance) {
    if (!(*cfg.tolerance > 0.0))
      throw Error(ErrorCode::InvalidArgument, "--tol must be positive");
    o.mte.tolerance = *cfg.tolerance;
    o.marginal.tolerance = *cfg.tolerance;
    o.frank_wolfe.gap_tolerance = *cfg.tolerance;
  }
  return o;
}

TollVector read_toll_file(const Network& net, const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
  if (j.is_object() && j.contains("toll")) j = j["toll"];
  if (!j.is_array()) throw Error(ErrorCode::ParseError, path + ": expected an array of tolls");
  std::vector<double> toll;
  for (const auto& v : j) {
    if (!v.is_number()) throw Error(ErrorCode::ParseError, path + ": tolls must be numbers");
    double p = v.get<double>();
    if (!(p >= 0.0) || !std::isfinite(p))
      throw Error(ErrorCode::NegativeToll, path + ": tolls must be finite and nonnegative");
    toll.push_back(p);
  }
  if (toll.size() != net.num_arcs())
    throw Error(ErrorCode::DimensionMismatch, path + ": expected " +
                                                  std::to_string(net.num_arcs()) + " tolls, got " +
                                                  std::to_string(toll.size()));
  return TollVector(std::move(toll));
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot write " + path.string());
  f << text;
  if (!f) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

std::filesystem::path prepare_out_dir(const RunConfig& cfg) {
  std::filesystem::path dir(cfg.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

// Prints the selected format and, with --out, writes every format to files.
void emit(const RunConfig& cfg, std::ostream& out, const std::string& stem,
          const std::string& table, const std::string& data, const std::string& dot) {
  switch (cfg.format) {
    case OutputFormat::Table: out << table; break;
    case OutputFormat::Data: out << data; break;
    case OutputFormat::Dot: out << dot; break;
  }
  if (cfg.out_dir.empty()) return;
  auto dir = prepare_out_dir(cfg);
  write_file(dir / (stem + ".txt"), table);
  write_file(dir / (stem + ".json"), data);
  write_file(dir / (stem + ".dot"), dot);
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  Scenario s = load_input(cfg);
  ValidationReport r = validate_report(s.network);
  emit(cfg, out, "validate", validation_table(s.network, r), validation_json(s.network, r),
       export_dot(s.network));
  return kExitOk;
}

int cmd_mte(const RunConfig& cfg, std::ostream& out) {
  Scenario s = load_input(cfg);
  ExperimentOptions opts = experiment_options(cfg);
  TollVector toll;
  if (cfg.toll_source == "zero") {
    toll = TollVector(std::vector<double>(s.network.num_arcs(), 0.0));
  } else if (cfg.toll_source == "marginal") {
    toll = solve_marginal_toll(s.network, s.beta, opts.marginal).toll;
  } else {
    toll = read_toll_file(s.network, cfg.toll_source);
  }
  MteReport r = mte_report(s.network, toll, s.beta, cfg.toll_source, opts.mte);
  emit(cfg, out, "mte", mte_table(s.network, r), mte_json(s.network, r),
       export_dot(s.network, r.result.flow, toll));
  return kExitOk;
}

int cmd_design(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Scenario s = load_input(cfg);
  const auto& l = cfg.lambda;
  EquityWeights weights = EquityWeights::make(l[0], l[1], l[2]);
  DesignReport r = design_report(s.network, s.beta, weights, experiment_options(cfg));
  emit(cfg, out, "design", design_table(s.network, r), design_json(s.network, r),
       export_dot(s.network, r.optimal_flow, r.solution.toll));
  if (r.solution.status != EquityStatus::Optimal) {
    err << "design: solver finished with status " << to_string(r.solution.status) << "\n";
    return kExitNumericalFailure;
  }
  return kExitOk;
}

int cmd_experiment(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Scenario s = load_input(cfg);
  ExperimentReport r = run_experiment(s, experiment_options(cfg));
  const Network& net = s.network;
  std::string table = experiment_table(net, r);
  std::string data = experiment_json(net, r);
  std::string plot = experiment_plot_data(net, r);
  std::string dot = export_dot(net, r.optimal_flow, r.marginal_toll);
  switch (cfg.format) {
    case OutputFormat::Table: out << table; break;
    case OutputFormat::Data: out << data; break;
    case OutputFormat::Dot: out << dot; break;
  }
  if (!cfg.out_dir.empty()) {
    auto dir = prepare_out_dir(cfg);
    write_file(dir / (r.scenario + ".txt"), table);
    write_file(dir / (r.scenario + ".json"), data);
    write_file(dir / (r.scenario + ".tsv"), plot);
    write_file(dir / (r.scenario + ".dot"), dot);
  }
  for (const auto& row : r.rows) {
    if (row.weights && row.status != EquityStatus::Optimal) {
      err << "experiment: row " << row.label << " finished with status " << to_string(row.status)
          << "\n";
      return kExitNumericalFailure;
    }
  }
  return kExitOk;
}

std::array<double, 3> parse_lambda(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) items.push_back(item);
  if (items.size() != 3)
    throw Error(ErrorCode::InvalidArgument, "--lambda needs exactly three values l1,l2,l3");
  std::array<double, 3> out{};
  for (std::size_t k = 0; k < 3; ++k) {
    std::size_t used = 0;
    try {
      out[k] = std::stod(items[k], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != items[k].size())
      throw Error(ErrorCode::InvalidArgument, "--lambda entry '" + items[k] + "' is not a number");
  }
  return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string lambda_text;
  std::string format_text = "table";

  CLI::App app{"Logit Markovian traffic equilibrium and equity toll design"};
  app.require_subcommand(1);
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out_dir, "Directory for output files");
    sub->add_option("--tol", cfg.tolerance, "Convergence tolerance override");
    sub->add_option("--format", format_text, "Output format")
        ->check(CLI::IsMember({"table", "data", "dot"}));
  };
  auto add_input = [&](CLI::App* sub) {
    sub->add_option("file", cfg.input_path, "Network file");
    sub->add_option("--scenario", cfg.scenario, "Built-in scenario name");
    sub->add_option("--beta", cfg.beta, "Logit dispersion parameter");
  };

  CLI::App* validate = app.add_subcommand("validate", "Validate a network file");
  validate->add_option("file", cfg.input_path, "Network file")->required();
  add_common(validate);

  CLI::App* mte = app.add_subcommand("mte", "Solve the Markovian traffic equilibrium");
  add_input(mte);
  mte->add_option("--toll", cfg.toll_source, "Toll file, 'zero' or 'marginal'");
  add_common(mte);

  CLI::App* design = app.add_subcommand("design", "Design an equity toll");
  add_input(design);
  design->add_option("--lambda", lambda_text, "Objective weights l1,l2,l3")->required();
  add_common(design);

  CLI::App* experiment = app.add_subcommand("experiment", "Run the weight sweep on a scenario");
  experiment->add_option("--scenario", cfg.scenario, "Built-in scenario name")->required();
  experiment->add_option("--beta", cfg.beta, "Logit dispersion parameter");
  add_common(experiment);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, r;
    int code = app.exit(e, o, r);
    out << o.str();
    err << r.str();
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (format_text == "data") cfg.format = OutputFormat::Data;
    else if (format_text == "dot") cfg.format = OutputFormat::Dot;
    if (*validate) return cmd_validate(cfg, out);
    if (*mte) return cmd_mte(cfg, out);
    if (*design) {
      cfg.lambda = parse_lambda(lambda_text);
      return cmd_design(cfg, out, err);
    }
    return cmd_experiment(cfg, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_input_error(e.code()) ? kExitInputError : kExitNumericalFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumericalFailure;
  }
}

}  // namespace tollkit
