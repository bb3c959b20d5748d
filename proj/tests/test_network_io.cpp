#include <doctest.h>

#include <filesystem>
#include <string>

#include "tollkit/error.hpp"
#include "tollkit/network_io.hpp"
#include "tollkit/scenarios.hpp"
#include "support.hpp"

using namespace tollkit;

namespace {

ErrorCode parse_error_code(const std::string& text, std::string* message = nullptr) {
  try {
    parse_network_text(text);
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  FAIL("expected a parse failure");
  return ErrorCode::Io;
}

const char* kSimple = R"({
  "nodes": ["o", "d"],
  "arcs": [{"id": 1, "tail": "o", "head": "d", "theta1": 1.0, "theta0": 2.0}],
  "origin": "o", "destination": "d", "demand": 10
})";

}  // namespace

TEST_CASE("parse a minimal file") {
  Network net = parse_network_text(kSimple);
  CHECK(net.num_arcs() == 1);
  CHECK(net.arc(0).latency.theta0() == 2.0);
  NetworkDocument doc = parse_network_document(kSimple);
  CHECK_FALSE(doc.beta.has_value());
  CHECK(doc.sweep.empty());
}

TEST_CASE("serialize then parse is the identity") {
  for (const auto& s : builtin_scenarios()) {
    std::string text = serialize_network(s.network);
    CHECK(parse_network_text(text) == s.network);
    CHECK(serialize_network(parse_network_text(text)) == text);
    NetworkDocument doc = scenario_document(s);
    NetworkDocument back = parse_network_document(serialize_network_document(doc));
    CHECK(back.network == s.network);
    CHECK(back.name == s.name);
    CHECK(back.beta == s.beta);
    CHECK(back.sweep == doc.sweep);
  }
  for (const auto& net : testing::random_networks(3, 30))
    CHECK(parse_network_text(serialize_network(net)) == net);
}

TEST_CASE("serialized numbers keep full precision") {
  Network net = build_network({"o", "d"},
                              {ArcSpec{1, "o", "d", LatencyFunction::affine(1.0 / 3.0, 0.1234567890123)}},
                              "o", "d", 2.0 / 7.0);
  Network back = parse_network_text(serialize_network(net));
  CHECK(back.arc(0).latency.theta1() == net.arc(0).latency.theta1());
  CHECK(back.demand() == net.demand());
}

TEST_CASE("parse errors carry line or field diagnostics") {
  std::string msg;
  CHECK(parse_error_code("{\n\"nodes\": [\"o\",\n", &msg) == ErrorCode::ParseError);
  CHECK(msg.find("line") != std::string::npos);

  CHECK(parse_error_code(R"({"nodes": ["o","d"], "arcs": [{"id": 1, "tail": "o", "head": "d", "theta1": "x", "theta0": 1}], "origin": "o", "destination": "d", "demand": 1})",
                         &msg) == ErrorCode::ParseError);
  CHECK(msg.find("arcs[0].theta1") != std::string::npos);

  CHECK(parse_error_code(R"({"nodes": ["o","d"], "arcs": [], "origin": "o", "destination": "d"})",
                         &msg) != ErrorCode::Io);

  CHECK(parse_error_code(R"({"nodes": ["o","d"], "arcs": [{"id": 1, "tail": "o", "head": "d", "theta1": 1, "theta0": 1}, {"id": 2, "tail": "d", "head": "o", "theta1": 1, "theta0": 1}], "origin": "o", "destination": "d", "demand": 1})") ==
        ErrorCode::CycleDetected);
}

TEST_CASE("missing files report an I/O error") {
  try {
    parse_network_file("/nonexistent/network.json");
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Io);
  }
}

TEST_CASE("shipped scenario files match the built-in scenarios") {
  std::filesystem::path dir = std::filesystem::path(TOLLKIT_SOURCE_DIR) / "scenarios";
  for (const char* name : {"sioux-falls-stand-in", "atlanta-stand-in", "diamond"}) {
    CAPTURE(name);
    NetworkDocument doc = load_network_document(dir / (std::string(name) + ".json"));
    Scenario s = require_scenario(name);
    CHECK(doc.network == s.network);
    CHECK(doc.beta == s.beta);
    CHECK(scenario_from_document(doc).sweep == s.sweep);
    if (std::string(name).ends_with("stand-in"))
      CHECK(doc.description.find("reconstructed") != std::string::npos);
  }
}

TEST_CASE("dot export") {
  Scenario s = require_scenario("diamond");
  std::string plain = export_dot(s.network);
  CHECK(plain.find("digraph") != std::string::npos);
  CHECK(plain == export_dot(s.network));
  FlowVector w{1, 2, 3, 4, 5};
  TollVector p{0.5, 0, 0, 0, 0};
  std::string annotated = export_dot(s.network, w, p);
  CHECK(annotated.find("w=1") != std::string::npos);
  CHECK(annotated.find("p=0.5") != std::string::npos);
}
