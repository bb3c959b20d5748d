#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tollkit/cli.hpp"

using namespace tollkit;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "tollkit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string source(const std::string& rel) { return std::string(TOLLKIT_SOURCE_DIR) + "/" + rel; }

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("tollkit_cli_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("validate") {
  Run ok = run({"validate", source("scenarios/atlanta-stand-in.json")});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("routes 4") != std::string::npos);

  Run cyc = run({"validate", source("tests/data/cyclic.json")});
  CHECK(cyc.code == 2);
  CHECK(cyc.err.find("CycleDetected") != std::string::npos);

  Run missing = run({"validate", "/no/such/file.json"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("cannot open") != std::string::npos);
}

TEST_CASE("mte") {
  Run one = run({"mte", "--scenario", "single-arc", "--format", "data"});
  REQUIRE(one.code == 0);
  auto j = nlohmann::json::parse(one.out);
  CHECK(j["schema_version"] == 1);
  CHECK(j["flow"][0].get<double>() == doctest::Approx(10.0));

  Run par = run({"mte", "--scenario", "parallel-identical", "--format", "data"});
  auto jp = nlohmann::json::parse(par.out);
  CHECK(jp["flow"][0].get<double>() == jp["flow"][1].get<double>());

  Run at = run({"mte", "--scenario", "atlanta-stand-in", "--toll", "zero", "--format", "data"});
  CHECK(nlohmann::json::parse(at.out)["residual"].get<double>() < 1e-10);

  Run marginal = run({"mte", "--scenario", "diamond", "--toll", "marginal"});
  CHECK(marginal.code == 0);

  auto dir = temp_dir("toll");
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "toll.json") << R"({"toll": [1, 0]})";
  Run file = run({"mte", "--scenario", "parallel-identical", "--toll", (dir / "toll.json").string(),
                  "--format", "data"});
  REQUIRE(file.code == 0);
  auto jf = nlohmann::json::parse(file.out);
  CHECK(jf["flow"][0].get<double>() < jf["flow"][1].get<double>());

  std::ofstream(dir / "short.json") << "[1]";
  CHECK(run({"mte", "--scenario", "parallel-identical", "--toll", (dir / "short.json").string()})
            .code == 2);
  std::ofstream(dir / "neg.json") << "[1, -2]";
  CHECK(run({"mte", "--scenario", "parallel-identical", "--toll", (dir / "neg.json").string()})
            .code == 2);

  Run nc = run({"mte", "--scenario", "atlanta-stand-in", "--tol", "1e-300"});
  CHECK(nc.code == 3);
}

TEST_CASE("design") {
  Run par = run({"design", "--scenario", "parallel-identical", "--lambda", "1,0,0", "--format",
                 "data"});
  REQUIRE(par.code == 0);
  auto j = nlohmann::json::parse(par.out);
  CHECK(std::abs(j["objectives"]["F1"].get<double>()) < 1e-9);
  CHECK(j["status"] == "optimal");

  Run at = run({"design", "--scenario", "atlanta-stand-in", "--lambda", "0.5,0.3,0.2", "--format",
                "data"});
  REQUIRE(at.code == 0);
  auto ja = nlohmann::json::parse(at.out);
  CHECK(ja["objectives"]["composite"].get<double>() <=
        ja["marginal_objectives"]["composite"].get<double>());
  CHECK(ja["flow_deviation"].get<double>() < 1e-6);

  CHECK(run({"design", "--scenario", "diamond", "--lambda", "-1,0,0"}).code == 2);
  CHECK(run({"design", "--scenario", "diamond", "--lambda", "1,0"}).code == 2);
  CHECK(run({"design", "--scenario", "diamond", "--lambda", "a,b,c"}).code == 2);
  CHECK(run({"design", "--scenario", "diamond"}).code == 2);
  CHECK(run({"design", source("scenarios/diamond.json"), "--scenario", "diamond", "--lambda",
             "1,0,0"})
            .code == 2);

  Run file = run({"design", source("scenarios/diamond.json"), "--lambda", "0,1,0"});
  CHECK(file.code == 0);
  Run dot = run({"design", "--scenario", "diamond", "--lambda", "0,1,0", "--format", "dot"});
  CHECK(dot.out.find("digraph") != std::string::npos);
}

TEST_CASE("experiment writes deterministic outputs") {
  auto a = temp_dir("exp_a"), b = temp_dir("exp_b");
  Run r1 = run({"experiment", "--scenario", "atlanta-stand-in", "--out", a.string()});
  Run r2 = run({"experiment", "--scenario", "atlanta-stand-in", "--out", b.string()});
  REQUIRE(r1.code == 0);
  REQUIRE(r2.code == 0);
  CHECK(r1.out == r2.out);
  for (const char* ext : {".txt", ".json", ".tsv", ".dot"}) {
    auto name = std::string("atlanta-stand-in") + ext;
    REQUIRE(std::filesystem::exists(a / name));
    CHECK(slurp(a / name) == slurp(b / name));
  }
  auto j = nlohmann::json::parse(slurp(a / "atlanta-stand-in.json"));
  CHECK(j["rows"].size() == 6);
  std::string tsv = slurp(a / "atlanta-stand-in.tsv");
  CHECK(tsv.rfind("arc\tw_star\tp_star", 0) == 0);
  CHECK(std::count(tsv.begin(), tsv.end(), '\n') == 7);

  CHECK(run({"experiment", "--scenario", "unknown"}).code == 2);
  CHECK(run({"experiment"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);
}
