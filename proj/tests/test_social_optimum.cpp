#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "support.hpp"
#include "tollkit/equilibrium.hpp"
#include "tollkit/error.hpp"
#include "tollkit/optim/finite_difference.hpp"
#include "tollkit/social_optimum.hpp"

using namespace tollkit;

namespace {

Network parallel(double a1, double b1, double a2, double b2, double demand) {
  return build_network({"o", "d"},
                       {ArcSpec{1, "o", "d", LatencyFunction::affine(a1, b1)},
                        ArcSpec{2, "o", "d", LatencyFunction::affine(a2, b2)}},
                       "o", "d", demand);
}

}  // namespace

TEST_CASE("perturbed total latency values") {
  Network one = build_network({"o", "d"}, {ArcSpec{1, "o", "d", LatencyFunction::affine(1, 2)}},
                              "o", "d", 10);
  auto v = perturbed_total_latency(one, FlowVector{10}, 0.5);
  CHECK(v.latency_part == doctest::Approx(120.0));
  CHECK(v.entropy_part == doctest::Approx(0.0));
  CHECK(v.total == doctest::Approx(120.0));

  Network two = parallel(1, 1, 1, 1, 10);
  auto t = perturbed_total_latency(two, FlowVector{5, 5}, 1.0);
  CHECK(t.latency_part == doctest::Approx(60.0));
  CHECK(t.entropy_part == doctest::Approx(-10.0 * std::log(2.0)));

  auto edge = perturbed_total_latency(two, FlowVector{10, 0}, 1.0);
  CHECK(std::isfinite(edge.total));
  CHECK(edge.entropy_part == doctest::Approx(0.0));

  CHECK_THROWS_AS(perturbed_total_latency(two, FlowVector{4, 4}, 1.0), Error);
}

TEST_CASE("gradient of L matches finite differences") {
  std::mt19937_64 rng(21);
  for (const auto& s : builtin_scenarios()) {
    for (int k = 0; k < 10; ++k) {
      FlowVector w = testing::random_interior_flow(s.network, rng);
      auto g = perturbed_total_latency_gradient(s.network, w.span(), s.beta);
      auto fd = optim::finite_difference_gradient(
          [&](const std::vector<double>& x) {
            return perturbed_total_latency_unchecked(s.network, x, s.beta).total;
          },
          w.values());
      for (std::size_t a = 0; a < g.size(); ++a)
        CHECK(std::abs(g[a] - fd[a]) <= 1e-6 * std::max(1.0, std::abs(g[a])));
    }
  }
}

TEST_CASE("L is strictly convex along segments") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (const auto& s : builtin_scenarios()) {
    if (enumerate_routes(s.network).size() < 2) continue;
    for (int k = 0; k < 20; ++k) {
      FlowVector a = testing::random_interior_flow(s.network, rng);
      FlowVector b = testing::random_interior_flow(s.network, rng);
      double t = u(rng);
      FlowVector m(s.network.num_arcs());
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = t * a[i] + (1 - t) * b[i];
      double la = perturbed_total_latency(s.network, a, s.beta).total;
      double lb = perturbed_total_latency(s.network, b, s.beta).total;
      double lm = perturbed_total_latency(s.network, m, s.beta).total;
      CHECK(lm < t * la + (1 - t) * lb);
    }
  }
}

TEST_CASE("direct minimization on small networks") {
  Network one = build_network({"o", "d"}, {ArcSpec{1, "o", "d", LatencyFunction::affine(1, 2)}},
                              "o", "d", 10);
  CHECK(minimize_social_cost_direct(one, 0.5).flow[0] == doctest::Approx(10.0));

  Network two = parallel(1, 1, 1, 1, 10);
  auto r = minimize_social_cost_direct(two, 0.5);
  CHECK(r.flow[0] == doctest::Approx(5.0).epsilon(1e-12));

  Network asym = parallel(1, 1, 2, 1, 1);
  auto fw = minimize_social_cost_direct(asym, 1.0);
  double w1 = oracle::two_arc_social_optimum({1, 1, 2, 1, 1.0, 1.0});
  CHECK(std::abs(fw.flow[0] - w1) < 1e-9);
  CHECK(fw.gap < 1e-10);
  CHECK(frank_wolfe_gap(asym, fw.flow, 1.0) < 1e-10);
}

TEST_CASE("marginal toll closed forms") {
  Network one = build_network({"o", "d"}, {ArcSpec{1, "o", "d", LatencyFunction::affine(1, 2)}},
                              "o", "d", 10);
  auto m = solve_marginal_toll(one, 0.5);
  CHECK(m.toll[0] == doctest::Approx(10.0));
  CHECK(m.flow[0] == doctest::Approx(10.0));

  Network two = parallel(1, 1, 1, 1, 10);
  auto p = solve_marginal_toll(two, 0.5);
  CHECK(p.toll[0] == doctest::Approx(5.0));
  CHECK(p.toll[1] == doctest::Approx(5.0));

  Network asym = parallel(1, 1, 2, 1, 1);
  auto q = solve_marginal_toll(asym, 1.0);
  double w1 = oracle::two_arc_social_optimum({1, 1, 2, 1, 1.0, 1.0});
  CHECK(std::abs(q.toll[0] - w1 * 1.0) < 1e-8);
  CHECK(std::abs(q.toll[1] - (1.0 - w1) * 2.0) < 1e-8);
}

TEST_CASE("both routes to the social optimum agree") {
  for (const auto& s : builtin_scenarios()) {
    CAPTURE(s.name);
    auto r = cross_validate_social_optimum(s.network, s.beta);
    CHECK(r.max_flow_discrepancy < 1e-6);
    CHECK(std::abs(r.objective_gap) < 1e-8);
    CHECK(r.direct.gap < 1e-10);
  }
  for (const auto& net : testing::random_networks(41, 15)) {
    auto r = cross_validate_social_optimum(net, 0.5);
    CHECK(r.max_flow_discrepancy < 1e-6);
  }
}

TEST_CASE("marginal toll is a fixed point") {
  for (const auto& s : builtin_scenarios()) {
    auto m = solve_marginal_toll(s.network, s.beta);
    MteResult w = solve_mte(s.network, m.toll, s.beta);
    TollVector again = marginal_toll_at(s.network, w.flow);
    CHECK(testing::max_abs_diff(again.span(), m.toll.span()) < 1e-8);
    for (double p : m.toll) CHECK(p > 0.0);
  }
}
