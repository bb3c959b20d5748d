#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "tollkit/network.hpp"
#include "tollkit/scenarios.hpp"

namespace testing {

using namespace tollkit;

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// Layered DAG with a single origin and destination. Every node gets an arc from
// an earlier layer and an arc to a later one, so every arc lies on a route.
inline Network random_layered_dag(std::mt19937_64& rng, int max_layers = 4, int max_width = 3,
                                  int extra_arcs = 3) {
  std::uniform_int_distribution<int> layer_count(1, max_layers);
  std::uniform_int_distribution<int> width(1, max_width);
  std::uniform_real_distribution<double> t1(0.5, 3.0), t0(0.5, 5.0), demand(1.0, 10.0);

  std::vector<std::vector<std::string>> layers{{"o"}};
  int inner = layer_count(rng);
  int next = 0;
  for (int k = 0; k < inner; ++k) {
    std::vector<std::string> layer;
    int n = width(rng);
    for (int i = 0; i < n; ++i) layer.push_back("v" + std::to_string(next++));
    layers.push_back(layer);
  }
  layers.push_back({"d"});

  std::vector<std::pair<std::string, std::string>> links;
  auto pick_before = [&](std::size_t layer) {
    std::uniform_int_distribution<std::size_t> l(0, layer - 1);
    const auto& from = layers[l(rng)];
    std::uniform_int_distribution<std::size_t> i(0, from.size() - 1);
    return from[i(rng)];
  };
  auto pick_after = [&](std::size_t layer) {
    std::uniform_int_distribution<std::size_t> l(layer + 1, layers.size() - 1);
    const auto& to = layers[l(rng)];
    std::uniform_int_distribution<std::size_t> i(0, to.size() - 1);
    return to[i(rng)];
  };
  for (std::size_t k = 1; k + 1 < layers.size(); ++k) {
    for (const auto& v : layers[k]) {
      links.emplace_back(pick_before(k), v);
      links.emplace_back(v, pick_after(k));
    }
  }
  for (int e = 0; e < extra_arcs; ++e) {
    std::uniform_int_distribution<std::size_t> l(0, layers.size() - 2);
    std::size_t k = l(rng);
    std::uniform_int_distribution<std::size_t> i(0, layers[k].size() - 1);
    links.emplace_back(layers[k][i(rng)], pick_after(k));
  }
  if (layers.size() == 2 && links.empty()) links.emplace_back("o", "d");

  std::vector<std::string> nodes;
  for (const auto& layer : layers)
    for (const auto& v : layer) nodes.push_back(v);
  std::vector<ArcSpec> arcs;
  int id = 1;
  for (const auto& [tail, head] : links)
    arcs.push_back(ArcSpec{id++, tail, head, LatencyFunction::affine(t1(rng), t0(rng))});
  return build_network(nodes, arcs, "o", "d", demand(rng));
}

// Interior point of the flow polytope: random split in [0.1, 0.9] weights at every node.
inline FlowVector random_interior_flow(const Network& net, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> share(0.1, 0.9);
  std::vector<double> weight(net.num_arcs());
  for (auto& w : weight) w = share(rng);
  std::vector<double> through(net.num_nodes(), 0.0);
  through[net.origin()] = net.demand();
  FlowVector flow(net.num_arcs());
  for (NodeIndex i : net.topological_order()) {
    double total = 0.0;
    for (ArcIndex a : net.out_arcs(i)) total += weight[a];
    for (ArcIndex a : net.out_arcs(i)) {
      flow[a] = through[i] * weight[a] / total;
      through[net.arc(a).head] += flow[a];
    }
  }
  return flow;
}

inline std::vector<Network> random_networks(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<Network> out;
  while (static_cast<int>(out.size()) < count) out.push_back(random_layered_dag(rng));
  return out;
}

}  // namespace testing
