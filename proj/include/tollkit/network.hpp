#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tollkit/arc_vector.hpp"
#include "tollkit/latency.hpp"

namespace tollkit {

using NodeIndex = std::size_t;
using ArcIndex = std::size_t;

/// Raw arc description as it appears in input files. Ids are 1..|A|.
struct ArcSpec {
  int id = 0;
  std::string tail;
  std::string head;
  LatencyFunction latency = LatencyFunction::affine(1.0, 1.0);
};

struct Arc {
  int id = 0;
  NodeIndex tail = 0;
  NodeIndex head = 0;
  LatencyFunction latency = LatencyFunction::affine(1.0, 1.0);

  friend bool operator==(const Arc&, const Arc&) = default;
};

/// Single-origin, single-destination acyclic traffic network. Immutable once
/// built; every arc lies on some origin-destination route.
class Network {
 public:
  std::size_t num_nodes() const noexcept { return node_names_.size(); }
  std::size_t num_arcs() const noexcept { return arcs_.size(); }

  std::span<const Arc> arcs() const noexcept { return arcs_; }
  const Arc& arc(ArcIndex a) const { return arcs_.at(a); }

  const std::string& node_name(NodeIndex i) const { return node_names_.at(i); }
  std::span<const std::string> node_names() const noexcept { return node_names_; }
  std::optional<NodeIndex> find_node(const std::string& name) const;

  NodeIndex origin() const noexcept { return origin_; }
  NodeIndex destination() const noexcept { return destination_; }
  double demand() const noexcept { return demand_; }

  /// Outgoing / incoming arc indices, ascending by arc id.
  std::span<const ArcIndex> out_arcs(NodeIndex i) const { return out_arcs_.at(i); }
  std::span<const ArcIndex> in_arcs(NodeIndex i) const { return in_arcs_.at(i); }

  /// Nodes in a topological order (origin first, destination last).
  std::span<const NodeIndex> topological_order() const noexcept { return topo_order_; }

  friend bool operator==(const Network& lhs, const Network& rhs);

 private:
  friend Network build_network(const std::vector<std::string>&, const std::vector<ArcSpec>&,
                               const std::string&, const std::string&, double);

  std::vector<std::string> node_names_;
  std::vector<Arc> arcs_;
  NodeIndex origin_ = 0;
  NodeIndex destination_ = 0;
  double demand_ = 0.0;
  std::vector<std::vector<ArcIndex>> out_arcs_;
  std::vector<std::vector<ArcIndex>> in_arcs_;
  std::vector<NodeIndex> topo_order_;
};

/// Validates and builds a network. Arcs may be given in any order; they are
/// stored by id. Throws Error with CycleDetected, UnreachableArc,
/// DuplicateArcId, NegativeDemand or InvalidNetwork.
Network build_network(const std::vector<std::string>& nodes, const std::vector<ArcSpec>& arcs,
                      const std::string& origin, const std::string& destination, double demand);

struct HeightMap {
  std::vector<int> arc_height;  // h_a, indexed by arc index
  int network_height = 0;       // length of the longest route
};

/// h_a = 1 when the arc enters the destination, otherwise one more than the
/// tallest arc leaving its head node.
HeightMap compute_heights(const Network& net);

using Route = std::vector<ArcIndex>;

struct RouteSet {
  std::vector<Route> routes;

  std::size_t size() const noexcept { return routes.size(); }
};

inline constexpr std::size_t kDefaultRouteCap = 10'000;

/// All origin-destination routes in lexicographic order of arc ids.
/// Throws Error(RouteCapExceeded) when more than `cap` routes exist.
RouteSet enumerate_routes(const Network& net, std::size_t cap = kDefaultRouteCap);

/// Number of routes, counted by dynamic programming (no enumeration).
double count_routes(const Network& net);

struct FeasibilityReport {
  bool feasible = false;
  double max_violation = 0.0;
};

/// Conservation at interior nodes, origin outflow = demand, nonnegativity.
/// Throws Error(DimensionMismatch).
FeasibilityReport check_flow_feasibility(const Network& net, std::span<const double> flow,
                                         double tol);

/// Uniform split at every node: each outgoing arc takes an equal share of the
/// node's throughput.
FlowVector uniform_split_flow(const Network& net);

/// Node throughput given arc flows: demand at the origin plus inflow.
std::vector<double> node_throughput(const Network& net, std::span<const double> flow);

}  // namespace tollkit
