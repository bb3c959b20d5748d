#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "support.hpp"
#include "tollkit/equilibrium.hpp"
#include "tollkit/error.hpp"

using namespace tollkit;

namespace {

Network parallel(double a1, double b1, double a2, double b2, double demand) {
  return build_network({"o", "d"},
                       {ArcSpec{1, "o", "d", LatencyFunction::affine(a1, b1)},
                        ArcSpec{2, "o", "d", LatencyFunction::affine(a2, b2)}},
                       "o", "d", demand);
}

TollVector zero_toll(const Network& net) { return TollVector(net.num_arcs()); }

}  // namespace

TEST_CASE("cost-to-go on small networks") {
  Network one = build_network({"o", "d"}, {ArcSpec{1, "o", "d", LatencyFunction::affine(1, 2)}},
                              "o", "d", 10);
  CHECK(compute_cost_to_go(one, FlowVector{10}, TollVector{0}, 0.5).arc_value[0] ==
        doctest::Approx(12.0));

  Network path = build_network({"o", "m", "d"},
                               {ArcSpec{1, "o", "m", LatencyFunction::affine(1, 1)},
                                ArcSpec{2, "m", "d", LatencyFunction::affine(1, 1)}},
                               "o", "d", 10);
  auto z = compute_cost_to_go(path, FlowVector{10, 10}, TollVector{0, 0}, 1.0);
  CHECK(z.arc_value[1] == doctest::Approx(11.0));
  CHECK(z.arc_value[0] == doctest::Approx(22.0));

  Network fork = build_network({"o", "m", "d"},
                               {ArcSpec{1, "o", "m", LatencyFunction::affine(1, 1)},
                                ArcSpec{2, "m", "d", LatencyFunction::affine(1, 1)},
                                ArcSpec{3, "m", "d", LatencyFunction::affine(1, 1)}},
                               "o", "d", 10);
  const double beta = 0.5;
  auto zf = compute_cost_to_go(fork, FlowVector{10, 5, 5}, TollVector{0, 0, 0}, beta);
  CHECK(zf.arc_value[0] == doctest::Approx(11.0 + 6.0 - std::log(2.0) / beta));
}

TEST_CASE("choice probabilities") {
  Network net = parallel(1, 1, 1, 1, 10);
  CostToGo cost{{1.0, 2.0}, {}, 1.0};
  cost.node_value.assign(net.num_nodes(), 0.0);
  auto p = choice_probabilities(net, cost);
  double e1 = std::exp(-1.0), e2 = std::exp(-2.0);
  CHECK(p.arc_probability[0] == doctest::Approx(e1 / (e1 + e2)).epsilon(1e-12));
  CHECK(p.arc_probability[0] + p.arc_probability[1] == doctest::Approx(1.0).epsilon(1e-12));

  cost.arc_value = {3.0, 3.0};
  p = choice_probabilities(net, cost);
  CHECK(p.arc_probability[0] == 0.5);
}

TEST_CASE("flow propagation") {
  Network net = build_network({"o", "m1", "m2", "d"},
                              {ArcSpec{1, "o", "m1", LatencyFunction::affine(1, 1)},
                               ArcSpec{2, "o", "m2", LatencyFunction::affine(1, 1)},
                               ArcSpec{3, "m1", "m2", LatencyFunction::affine(1, 1)},
                               ArcSpec{4, "m1", "d", LatencyFunction::affine(1, 1)},
                               ArcSpec{5, "m2", "d", LatencyFunction::affine(1, 1)}},
                              "o", "d", 10);
  ChoiceProbabilities p{{0.7, 0.3, 0.5, 0.5, 1.0}};
  FlowVector w = propagate_flows(net, p);
  CHECK(w[0] == doctest::Approx(7.0));
  CHECK(w[1] == doctest::Approx(3.0));
  CHECK(w[4] == doctest::Approx(6.5));
  CHECK(check_flow_feasibility(net, w.span(), 1e-12).feasible);
}

TEST_CASE("MTE on trivial networks") {
  Network one = build_network({"o", "d"}, {ArcSpec{1, "o", "d", LatencyFunction::affine(1, 2)}},
                              "o", "d", 10);
  CHECK(solve_mte(one, TollVector{3.0}, 0.5).flow[0] == doctest::Approx(10.0));
  CHECK(mte_residual(one, FlowVector{10.0}, TollVector{0.0}, 0.5) == 0.0);

  Network two = parallel(1, 1, 1, 1, 10);
  MteResult r = solve_mte(two, zero_toll(two), 0.5);
  CHECK(r.flow[0] == r.flow[1]);
  CHECK(r.flow[0] == doctest::Approx(5.0));
  CHECK(mte_residual(two, FlowVector{5.0, 5.0}, zero_toll(two), 0.5) < 1e-14);
}

TEST_CASE("MTE matches the two-arc bisection oracle") {
  Network net = parallel(1, 1, 2, 1, 1);
  MteResult r = solve_mte(net, zero_toll(net), 1.0);
  double w1 = oracle::two_arc_equilibrium({1, 1, 2, 1, 1.0, 1.0});
  CHECK(std::abs(r.flow[0] - w1) < 1e-9);
  CHECK(r.residual < 1e-10);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  for (int k = 0; k < 20; ++k) {
    oracle::TwoArcs p{u(rng), u(rng), u(rng), u(rng), 3.0 * u(rng), u(rng), u(rng), u(rng)};
    Network n = parallel(p.a1, p.b1, p.a2, p.b2, p.demand);
    MteResult s = solve_mte(n, TollVector{p.toll1, p.toll2}, p.beta);
    CHECK(std::abs(s.flow[0] - oracle::two_arc_equilibrium(p)) < 1e-9);
  }
}

TEST_CASE("MTE is independent of the starting flow") {
  std::mt19937_64 rng(11);
  for (const auto& s : builtin_scenarios()) {
    TollVector toll(s.network.num_arcs(), 0.0);
    MteResult base = solve_mte(s.network, toll, s.beta);
    for (int k = 0; k < 10; ++k) {
      MteOptions o;
      o.initial_flow = testing::random_interior_flow(s.network, rng);
      MteResult r = solve_mte(s.network, toll, s.beta, o);
      CHECK(testing::max_abs_diff(r.flow.span(), base.flow.span()) < 10 * o.tolerance);
      CHECK(check_flow_feasibility(s.network, r.flow.span(), 1e-8).feasible);
    }
  }
}

TEST_CASE("MTE output is conservative on random networks") {
  for (const auto& net : testing::random_networks(17, 30)) {
    MteResult r = solve_mte(net, TollVector(net.num_arcs(), 0.0), 0.5);
    CHECK(r.residual < 1e-10);
    CHECK(check_flow_feasibility(net, r.flow.span(), 1e-8).feasible);
  }
}

TEST_CASE("raising a toll lowers that arc's flow") {
  Network net = parallel(1, 2, 1.5, 1, 10);
  double prev = 11.0;
  for (double p = 0.0; p <= 20.0; p += 1.0) {
    double w = solve_mte(net, TollVector{p, 0.0}, 0.5).flow[0];
    CHECK(w < prev);
    prev = w;
  }
}

TEST_CASE("cost-to-go stays finite with large costs") {
  for (const auto& s : builtin_scenarios()) {
    std::vector<ArcSpec> arcs;
    for (const auto& a : s.network.arcs())
      arcs.push_back(ArcSpec{a.id, s.network.node_name(a.tail), s.network.node_name(a.head),
                             LatencyFunction::affine(a.latency.theta1() * 1e3,
                                                     a.latency.theta0() * 1e3)});
    auto names = s.network.node_names();
    Network big = build_network({names.begin(), names.end()}, arcs,
                                s.network.node_name(s.network.origin()),
                                s.network.node_name(s.network.destination()), s.network.demand());
    FlowVector w = uniform_split_flow(big);
    CostToGo z = compute_cost_to_go(big, w, TollVector(big.num_arcs()), s.beta);
    for (double v : z.arc_value) CHECK(std::isfinite(v));
    auto p = choice_probabilities(big, z);
    for (double v : p.arc_probability) CHECK(std::isfinite(v));
  }
}

TEST_CASE("MTE reports non-convergence") {
  Scenario s = require_scenario("atlanta-stand-in");
  MteOptions o;
  o.max_iterations = 2;
  try {
    solve_mte(s.network, TollVector(s.network.num_arcs()), s.beta, o);
    FAIL("expected NoConvergenceError");
  } catch (const NoConvergenceError& e) {
    CHECK(e.code() == ErrorCode::NoConvergence);
    CHECK(e.iterations() == 2);
    CHECK(e.residual() > 0.0);
  }
}
