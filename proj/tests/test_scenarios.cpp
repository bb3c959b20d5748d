#include <doctest.h>

#include "tollkit/error.hpp"
#include "tollkit/scenarios.hpp"

using namespace tollkit;

TEST_CASE("published latency parameters") {
  Scenario at = require_scenario("atlanta-stand-in");
  REQUIRE(at.network.num_arcs() == 6);
  CHECK(at.network.arc(2).latency.theta1() == 0.5);
  CHECK(at.network.arc(2).latency.theta0() == 2.0);
  CHECK(at.network.arc(0).latency.theta1() == 2.0);
  CHECK(at.network.arc(0).latency.theta0() == 4.0);

  Scenario sf = require_scenario("sioux-falls-stand-in");
  REQUIRE(sf.network.num_arcs() == 10);
  CHECK(sf.network.arc(7).latency.theta1() == 14.34);
  CHECK(sf.network.arc(7).latency.theta0() == 0.009);

  for (const auto* s : {&at, &sf}) {
    CHECK(s->beta == 0.5);
    CHECK(s->network.demand() == 10.0);
    CHECK(enumerate_routes(s->network).size() >= 3);
    for (std::size_t a = 0; a < s->network.num_arcs(); ++a)
      CHECK(s->network.arc(a).id == static_cast<int>(a) + 1);
  }
}

TEST_CASE("weight grid") {
  auto grid = default_sweep();
  REQUIRE(grid.size() == 5);
  CHECK(grid[0] == EquityWeights{1, 0, 0});
  CHECK(grid[1] == EquityWeights{0, 1, 0});
  CHECK(grid[2] == EquityWeights{0.7, 0, 0.3});
  CHECK(grid[3] == EquityWeights{0, 0.7, 0.3});
  CHECK(grid[4] == EquityWeights{0.5, 0.3, 0.2});
}

TEST_CASE("scenario lookup") {
  CHECK(find_scenario("diamond").has_value());
  CHECK_FALSE(find_scenario("nope").has_value());
  CHECK_THROWS_AS(require_scenario("nope"), Error);
  for (const auto& s : builtin_scenarios()) CHECK(s.beta > 0.0);
}

TEST_CASE("experiment rows") {
  for (const auto& s : builtin_scenarios()) {
    CAPTURE(s.name);
    ExperimentReport r = run_experiment(s);
    REQUIRE(r.rows.size() == s.sweep.size() + 1);
    const auto& base = r.rows.front();
    CHECK_FALSE(base.weights.has_value());
    for (std::size_t k = 1; k < r.rows.size(); ++k) {
      const auto& row = r.rows[k];
      CHECK(row.status == EquityStatus::Optimal);
      CHECK(row.feasible_shift);
      CHECK(row.flow_deviation < 1e-6);
      CHECK(row.objectives.revenue <= base.objectives.revenue + 1e-9);
      CHECK(row.objectives.max_cost <= base.objectives.max_cost + 1e-9);
      CHECK(row.objectives.composite <= row.marginal_composite + 1e-9);
    }
  }
}

TEST_CASE("experiments are deterministic") {
  Scenario s = require_scenario("sioux-falls-stand-in");
  ExperimentReport a = run_experiment(s);
  ExperimentReport b = run_experiment(s);
  CHECK(a.optimal_flow == b.optimal_flow);
  CHECK(a.marginal_toll == b.marginal_toll);
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    CHECK(a.rows[k].toll == b.rows[k].toll);
    CHECK(a.rows[k].objectives.composite == b.rows[k].objectives.composite);
  }
}

TEST_CASE("identical parallel arcs need no toll") {
  ExperimentReport r = run_experiment(require_scenario("parallel-identical"));
  CHECK(r.rows[1].objectives.revenue == doctest::Approx(0.0));
  CHECK(r.rows[2].objectives.revenue == doctest::Approx(0.0));
}
