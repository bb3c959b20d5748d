#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tollkit/arc_vector.hpp"
#include "tollkit/network.hpp"

namespace tollkit {

/// Everything a network document may carry. Only the network is mandatory;
/// `beta` and `sweep` are used by scenario files.
struct NetworkDocument {
  Network network;
  std::string name;
  std::string description;
  std::optional<double> beta;
  std::vector<std::array<double, 3>> sweep;
};

/// Parses the JSON network format. Throws Error(ParseError) with a line number
/// or field path; build_network errors propagate unchanged.
NetworkDocument parse_network_document(const std::string& text);
NetworkDocument load_network_document(const std::filesystem::path& path);

Network parse_network_text(const std::string& text);
Network parse_network_file(const std::filesystem::path& path);

std::string serialize_network(const Network& net);
std::string serialize_network_document(const NetworkDocument& doc);

/// Graphviz description of the network. Edge labels carry the arc id and,
/// when given, the flow and toll on the arc.
std::string export_dot(const Network& net, const std::optional<FlowVector>& flow = std::nullopt,
                       const std::optional<TollVector>& toll = std::nullopt);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace tollkit
