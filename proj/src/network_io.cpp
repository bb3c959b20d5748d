#include "tollkit/network_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "tollkit/error.hpp"

namespace tollkit {

using nlohmann::json;

namespace {

[[noreturn]] void field_error(const std::string& path, const std::string& msg) {
  throw Error(ErrorCode::ParseError, "field '" + path + "': " + msg);
}

const json& require(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) field_error(path + key, "missing");
  return *it;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) field_error(path, "expected a number, got " + std::string(v.type_name()));
  return v.get<double>();
}

std::string as_node_id(const json& v, const std::string& path) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  field_error(path, "expected a node identifier (string or integer)");
}

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

}  // namespace

NetworkDocument parse_network_document(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::ostringstream os;
    os << "line " << line_of_offset(text, e.byte) << ": " << e.what();
    throw Error(ErrorCode::ParseError, os.str());
  }
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "line 1: top level must be an object");

  std::vector<std::string> nodes;
  const json& jnodes = require(doc, "nodes", "");
  if (!jnodes.is_array()) field_error("nodes", "expected an array");
  for (std::size_t i = 0; i < jnodes.size(); ++i)
    nodes.push_back(as_node_id(jnodes[i], "nodes[" + std::to_string(i) + "]"));

  std::vector<ArcSpec> arcs;
  const json& jarcs = require(doc, "arcs", "");
  if (!jarcs.is_array()) field_error("arcs", "expected an array");
  for (std::size_t i = 0; i < jarcs.size(); ++i) {
    const std::string path = "arcs[" + std::to_string(i) + "].";
    const json& ja = jarcs[i];
    if (!ja.is_object()) field_error(path.substr(0, path.size() - 1), "expected an object");
    const json& jid = require(ja, "id", path);
    if (!jid.is_number_integer()) field_error(path + "id", "expected an integer");
    ArcSpec spec;
    spec.id = jid.get<int>();
    spec.tail = as_node_id(require(ja, "tail", path), path + "tail");
    spec.head = as_node_id(require(ja, "head", path), path + "head");
    double theta1 = as_number(require(ja, "theta1", path), path + "theta1");
    double theta0 = as_number(require(ja, "theta0", path), path + "theta0");
    try {
      spec.latency = LatencyFunction::affine(theta1, theta0);
    } catch (const Error& e) {
      field_error(path + "theta1/theta0", e.what());
    }
    arcs.push_back(std::move(spec));
  }

  std::string origin = as_node_id(require(doc, "origin", ""), "origin");
  std::string destination = as_node_id(require(doc, "destination", ""), "destination");
  double demand = as_number(require(doc, "demand", ""), "demand");

  NetworkDocument out{build_network(nodes, arcs, origin, destination, demand), {}, {}, {}, {}};
  if (auto it = doc.find("name"); it != doc.end()) {
    if (!it->is_string()) field_error("name", "expected a string");
    out.name = it->get<std::string>();
  }
  if (auto it = doc.find("description"); it != doc.end()) {
    if (!it->is_string()) field_error("description", "expected a string");
    out.description = it->get<std::string>();
  }
  if (auto it = doc.find("beta"); it != doc.end() && !it->is_null()) {
    double beta = as_number(*it, "beta");
    if (!(beta > 0.0)) field_error("beta", "must be positive");
    out.beta = beta;
  }
  if (auto it = doc.find("sweep"); it != doc.end()) {
    if (!it->is_array()) field_error("sweep", "expected an array of [l1, l2, l3]");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string path = "sweep[" + std::to_string(i) + "]";
      const json& row = (*it)[i];
      if (!row.is_array() || row.size() != 3) field_error(path, "expected three weights");
      std::array<double, 3> lambda{};
      for (std::size_t k = 0; k < 3; ++k) {
        lambda[k] = as_number(row[k], path + "[" + std::to_string(k) + "]");
        if (!(lambda[k] >= 0.0)) field_error(path, "weights must be nonnegative");
      }
      out.sweep.push_back(lambda);
    }
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

NetworkDocument load_network_document(const std::filesystem::path& path) {
  std::string text = read_text_file(path);
  try {
    return parse_network_document(text);
  } catch (const Error& e) {
    std::string message = e.what();
    std::string prefix = std::string(to_string(e.code())) + ": ";
    if (message.starts_with(prefix)) message.erase(0, prefix.size());
    throw Error(e.code(), path.string() + ": " + message);
  }
}

Network parse_network_text(const std::string& text) { return parse_network_document(text).network; }

Network parse_network_file(const std::filesystem::path& path) {
  return load_network_document(path).network;
}

namespace {

using nlohmann::ordered_json;

void write_network(ordered_json& doc, const Network& net) {
  doc["nodes"] = net.node_names();
  doc["arcs"] = ordered_json::array();
  for (const auto& arc : net.arcs()) {
    doc["arcs"].push_back({{"id", arc.id},
                           {"tail", net.node_name(arc.tail)},
                           {"head", net.node_name(arc.head)},
                           {"theta1", arc.latency.theta1()},
                           {"theta0", arc.latency.theta0()}});
  }
  doc["origin"] = net.node_name(net.origin());
  doc["destination"] = net.node_name(net.destination());
  doc["demand"] = net.demand();
}

}  // namespace

// nlohmann::json writes doubles with the shortest representation that round
// trips, which is never fewer significant digits than the value carries.
std::string serialize_network(const Network& net) {
  ordered_json doc = ordered_json::object();
  write_network(doc, net);
  return doc.dump(2) + "\n";
}

std::string serialize_network_document(const NetworkDocument& doc) {
  ordered_json out = ordered_json::object();
  if (!doc.name.empty()) out["name"] = doc.name;
  if (!doc.description.empty()) out["description"] = doc.description;
  write_network(out, doc.network);
  if (doc.beta) out["beta"] = *doc.beta;
  if (!doc.sweep.empty()) {
    out["sweep"] = ordered_json::array();
    for (const auto& row : doc.sweep) out["sweep"].push_back({row[0], row[1], row[2]});
  }
  return out.dump(2) + "\n";
}

namespace {
std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out + "\"";
}
}  // namespace

std::string export_dot(const Network& net, const std::optional<FlowVector>& flow,
                       const std::optional<TollVector>& toll) {
  if (flow && flow->size() != net.num_arcs())
    throw Error(ErrorCode::DimensionMismatch, "flow size does not match arc count");
  if (toll && toll->size() != net.num_arcs())
    throw Error(ErrorCode::DimensionMismatch, "toll size does not match arc count");
  std::ostringstream os;
  os << std::setprecision(12);
  os << "digraph network {\n  rankdir=LR;\n";
  for (NodeIndex i = 0; i < net.num_nodes(); ++i) {
    os << "  " << dot_quote(net.node_name(i));
    if (i == net.origin()) os << " [shape=doublecircle, xlabel=\"origin\"]";
    if (i == net.destination()) os << " [shape=doublecircle, xlabel=\"destination\"]";
    os << ";\n";
  }
  for (ArcIndex a = 0; a < net.num_arcs(); ++a) {
    const Arc& arc = net.arc(a);
    std::ostringstream label;
    label << std::setprecision(12) << "a" << arc.id;
    if (flow) label << " w=" << (*flow)[a];
    if (toll) label << " p=" << (*toll)[a];
    os << "  " << dot_quote(net.node_name(arc.tail)) << " -> " << dot_quote(net.node_name(arc.head))
       << " [label=" << dot_quote(label.str()) << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace tollkit
