#include "tollkit/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "tollkit/error.hpp"

namespace tollkit {

std::optional<NodeIndex> Network::find_node(const std::string& name) const {
  auto it = std::find(node_names_.begin(), node_names_.end(), name);
  if (it == node_names_.end()) return std::nullopt;
  return static_cast<NodeIndex>(it - node_names_.begin());
}

bool operator==(const Network& lhs, const Network& rhs) {
  return lhs.node_names_ == rhs.node_names_ && lhs.arcs_ == rhs.arcs_ &&
         lhs.origin_ == rhs.origin_ && lhs.destination_ == rhs.destination_ &&
         lhs.demand_ == rhs.demand_;
}

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

// Marks nodes reachable from `start` following arcs forward (or backward).
std::vector<char> reachable(std::size_t n, const std::vector<std::vector<ArcIndex>>& adjacency,
                            const std::vector<Arc>& arcs, NodeIndex start, bool forward) {
  std::vector<char> seen(n, 0);
  std::vector<NodeIndex> stack{start};
  seen[start] = 1;
  while (!stack.empty()) {
    NodeIndex i = stack.back();
    stack.pop_back();
    for (ArcIndex a : adjacency[i]) {
      NodeIndex next = forward ? arcs[a].head : arcs[a].tail;
      if (!seen[next]) {
        seen[next] = 1;
        stack.push_back(next);
      }
    }
  }
  return seen;
}

}  // namespace

Network build_network(const std::vector<std::string>& nodes, const std::vector<ArcSpec>& arcs,
                      const std::string& origin, const std::string& destination, double demand) {
  if (nodes.empty()) fail(ErrorCode::InvalidNetwork, "node list is empty");
  if (arcs.empty()) fail(ErrorCode::InvalidNetwork, "arc list is empty");
  if (!std::isfinite(demand)) fail(ErrorCode::InvalidNetwork, "demand must be finite");
  if (demand < 0.0) {
    std::ostringstream os;
    os << "demand must be nonnegative, got " << demand;
    fail(ErrorCode::NegativeDemand, os.str());
  }

  Network net;
  std::map<std::string, NodeIndex> index;
  for (const auto& name : nodes) {
    if (name.empty()) fail(ErrorCode::InvalidNetwork, "empty node identifier");
    if (!index.emplace(name, net.node_names_.size()).second)
      fail(ErrorCode::InvalidNetwork, "duplicate node '" + name + "'");
    net.node_names_.push_back(name);
  }
  auto lookup = [&](const std::string& name, const std::string& role) {
    auto it = index.find(name);
    if (it == index.end()) fail(ErrorCode::InvalidNetwork, role + " '" + name + "' is not a node");
    return it->second;
  };
  net.origin_ = lookup(origin, "origin");
  net.destination_ = lookup(destination, "destination");
  if (net.origin_ == net.destination_)
    fail(ErrorCode::InvalidNetwork, "origin and destination must differ");
  net.demand_ = demand;

  const std::size_t n = nodes.size();
  const std::size_t m = arcs.size();
  std::vector<std::optional<Arc>> by_id(m);
  for (const auto& spec : arcs) {
    if (spec.id < 1 || static_cast<std::size_t>(spec.id) > m) {
      std::ostringstream os;
      os << "arc id " << spec.id << " outside 1.." << m << " (ids must be contiguous)";
      fail(ErrorCode::InvalidNetwork, os.str());
    }
    auto& slot = by_id[static_cast<std::size_t>(spec.id - 1)];
    if (slot) fail(ErrorCode::DuplicateArcId, "arc id " + std::to_string(spec.id) + " repeated");
    const std::string where = "arc " + std::to_string(spec.id) + " ";
    slot = Arc{spec.id, lookup(spec.tail, where + "tail"), lookup(spec.head, where + "head"),
               spec.latency};
    if (slot->tail == slot->head)
      fail(ErrorCode::CycleDetected, "arc " + std::to_string(spec.id) + " is a self-loop");
  }
  for (auto& slot : by_id) net.arcs_.push_back(*slot);

  net.out_arcs_.assign(n, {});
  net.in_arcs_.assign(n, {});
  for (ArcIndex a = 0; a < m; ++a) {
    net.out_arcs_[net.arcs_[a].tail].push_back(a);
    net.in_arcs_[net.arcs_[a].head].push_back(a);
  }

  // Kahn's algorithm; the smallest ready node index goes first so the order
  // is deterministic.
  std::vector<std::size_t> indegree(n);
  for (NodeIndex i = 0; i < n; ++i) indegree[i] = net.in_arcs_[i].size();
  std::vector<NodeIndex> ready;
  for (NodeIndex i = 0; i < n; ++i)
    if (indegree[i] == 0) ready.push_back(i);
  while (!ready.empty()) {
    auto it = std::min_element(ready.begin(), ready.end());
    NodeIndex i = *it;
    ready.erase(it);
    net.topo_order_.push_back(i);
    for (ArcIndex a : net.out_arcs_[i])
      if (--indegree[net.arcs_[a].head] == 0) ready.push_back(net.arcs_[a].head);
  }
  if (net.topo_order_.size() != n) {
    std::ostringstream os;
    os << "graph has a directed cycle through node(s)";
    for (NodeIndex i = 0; i < n; ++i)
      if (indegree[i] > 0) os << " '" << net.node_names_[i] << "'";
    fail(ErrorCode::CycleDetected, os.str());
  }

  auto from_origin = reachable(n, net.out_arcs_, net.arcs_, net.origin_, true);
  auto to_destination = reachable(n, net.in_arcs_, net.arcs_, net.destination_, false);
  if (!to_destination[net.origin_])
    fail(ErrorCode::InvalidNetwork, "destination is not reachable from the origin");
  for (const auto& arc : net.arcs_) {
    if (!from_origin[arc.tail] || !to_destination[arc.head])
      fail(ErrorCode::UnreachableArc,
           "arc " + std::to_string(arc.id) + " lies on no origin-destination route");
  }
  for (NodeIndex i = 0; i < n; ++i) {
    if (i == net.origin_ || i == net.destination_) continue;
    if (net.in_arcs_[i].empty() || net.out_arcs_[i].empty())
      fail(ErrorCode::InvalidNetwork,
           "node '" + net.node_names_[i] + "' needs at least one incoming and one outgoing arc");
  }
  if (!net.in_arcs_[net.origin_].empty())
    fail(ErrorCode::InvalidNetwork, "origin has incoming arcs");
  return net;
}

HeightMap compute_heights(const Network& net) {
  HeightMap map;
  map.arc_height.assign(net.num_arcs(), 0);
  std::vector<int> node_height(net.num_nodes(), 0);
  auto order = net.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    NodeIndex i = *it;
    for (ArcIndex a : net.out_arcs(i)) {
      NodeIndex head = net.arc(a).head;
      int h = head == net.destination() ? 1 : 1 + node_height[head];
      map.arc_height[a] = h;
      node_height[i] = std::max(node_height[i], h);
    }
  }
  map.network_height = node_height[net.origin()];
  return map;
}

RouteSet enumerate_routes(const Network& net, std::size_t cap) {
  RouteSet set;
  Route current;
  // Iterative DFS over (node, next out-arc position) frames.
  std::vector<std::pair<NodeIndex, std::size_t>> stack{{net.origin(), 0}};
  while (!stack.empty()) {
    auto& [node, pos] = stack.back();
    if (node == net.destination()) {
      if (set.routes.size() == cap) {
        throw Error(ErrorCode::RouteCapExceeded,
                    "more than " + std::to_string(cap) + " routes");
      }
      set.routes.push_back(current);
      stack.pop_back();
      if (!current.empty()) current.pop_back();
      continue;
    }
    auto outs = net.out_arcs(node);
    if (pos == outs.size()) {
      stack.pop_back();
      if (!current.empty()) current.pop_back();
      continue;
    }
    ArcIndex a = outs[pos++];
    current.push_back(a);
    stack.emplace_back(net.arc(a).head, 0);
  }
  return set;
}

double count_routes(const Network& net) {
  std::vector<double> count(net.num_nodes(), 0.0);
  count[net.destination()] = 1.0;
  auto order = net.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    for (ArcIndex a : net.out_arcs(*it)) count[*it] += count[net.arc(a).head];
  }
  return count[net.origin()];
}

std::vector<double> node_throughput(const Network& net, std::span<const double> flow) {
  std::vector<double> x(net.num_nodes(), 0.0);
  x[net.origin()] = net.demand();
  for (ArcIndex a = 0; a < net.num_arcs(); ++a) x[net.arc(a).head] += flow[a];
  return x;
}

FeasibilityReport check_flow_feasibility(const Network& net, std::span<const double> flow,
                                         double tol) {
  if (flow.size() != net.num_arcs()) {
    throw Error(ErrorCode::DimensionMismatch, "flow has " + std::to_string(flow.size()) +
                                                  " entries, network has " +
                                                  std::to_string(net.num_arcs()) + " arcs");
  }
  double worst = 0.0;
  for (double w : flow) {
    if (!std::isfinite(w)) return {false, std::numeric_limits<double>::infinity()};
    worst = std::max(worst, -w);
  }
  for (NodeIndex i = 0; i < net.num_nodes(); ++i) {
    if (i == net.destination()) continue;
    double out = 0.0;
    for (ArcIndex a : net.out_arcs(i)) out += flow[a];
    double in = i == net.origin() ? net.demand() : 0.0;
    for (ArcIndex a : net.in_arcs(i)) in += flow[a];
    worst = std::max(worst, std::abs(out - in));
  }
  return {worst <= tol, worst};
}

FlowVector uniform_split_flow(const Network& net) {
  FlowVector w(net.num_arcs());
  std::vector<double> x(net.num_nodes(), 0.0);
  x[net.origin()] = net.demand();
  for (NodeIndex i : net.topological_order()) {
    auto outs = net.out_arcs(i);
    if (outs.empty()) continue;
    double share = x[i] / static_cast<double>(outs.size());
    for (ArcIndex a : outs) {
      w[a] = share;
      x[net.arc(a).head] += share;
    }
  }
  return w;
}

}  // namespace tollkit
