#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

using namespace rggcrit::cli;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "rggcrit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) out.push_back(cell);
  return out;
}

}  // namespace

TEST_CASE("theory reproduces the density constant") {
  const auto r = invoke({"theory", "--d", "3", "--k", "0", "--c", "1", "--n", "1e6", "--format", "json"});
  REQUIRE(r.code == kOk);
  const auto j = json::parse(r.out);
  CHECK(j["c_d"].get<double>() == doctest::Approx(std::numbers::pi).epsilon(1e-15));
  CHECK(j["rows"].size() == 1);
  const auto& row = j["rows"][0];
  CHECK(row["area"].get<double>() == doctest::Approx(6.0));
  CHECK(row["target"].get<double>() == doctest::Approx(std::exp(-std::exp(-1.0))));
}

TEST_CASE("theory rejects n below the regime") {
  const auto r = invoke({"theory", "--d", "3", "--n", "2"});
  CHECK(r.code == kDomain);
  CHECK(r.err.find("regime") != std::string::npos);
}

TEST_CASE("csv and json carry the same values") {
  const std::vector<std::string> base{"theory", "--d", "4", "--k", "1", "--c-grid", "-1:2:4", "--n-grid", "1e3,1e5"};
  auto csv_args = base, json_args = base;
  json_args.insert(json_args.end(), {"--format", "json"});
  const auto csv = invoke(csv_args), js = invoke(json_args);
  REQUIRE(csv.code == kOk);
  REQUIRE(js.code == kOk);
  std::stringstream lines(csv.out);
  std::string header;
  std::getline(lines, header);
  const auto cols = split(header);
  const auto rows = json::parse(js.out)["rows"];
  std::size_t i = 0;
  for (std::string line; std::getline(lines, line); ++i) {
    const auto cells = split(line);
    REQUIRE(cells.size() == cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) CHECK(std::stod(cells[c]) == rows[i][cols[c]].get<double>());
  }
  CHECK(i == 8);
}

TEST_CASE("usage errors") {
  CHECK(invoke({"theory", "--bogus", "1"}).code == kUsage);
  CHECK(invoke({"nonsense"}).code == kUsage);
  CHECK(invoke({"theory", "--format", "xml"}).code == kUsage);
  CHECK(invoke({"report"}).code == kUsage);
}

TEST_CASE("report on a missing file is an I/O error") {
  CHECK(invoke({"report", "does_not_exist.json"}).code == kIo);
}

TEST_CASE("simulate is reproducible") {
  const std::vector<std::string> args{"simulate", "--d", "3", "--k", "0", "--n", "200", "--M", "4", "--seed", "7"};
  auto a = args, b = args;
  a.insert(a.end(), {"--out", "cli_sim_a"});
  b.insert(b.end(), {"--out", "cli_sim_b", "--threads", "2"});
  REQUIRE(invoke(a).code == kOk);
  REQUIRE(invoke(b).code == kOk);
  for (const char* suffix : {"_trials.csv", "_summary.csv", "_summary.json"}) {
    const auto x = slurp(std::string("cli_sim_a") + suffix);
    CHECK_FALSE(x.empty());
    CHECK(x == slurp(std::string("cli_sim_b") + suffix));
  }
  const auto trials = slurp("cli_sim_a_trials.csv");
  CHECK(std::count(trials.begin(), trials.end(), '\n') == 5);
}

TEST_CASE("report verdicts") {
  const auto lemma = invoke({"verify-lemma", "--d", "3", "--k", "1", "--n-grid", "1e4,1e6,1e8", "--format", "json"});
  REQUIRE(lemma.code == kOk);
  const auto doc = json::parse(lemma.out);
  REQUIRE(doc["rows"].size() == 3);
  double prev = 1e9;
  for (const auto& row : doc["rows"]) {
    const double dev = std::abs(row["ratio"].get<double>() - 1.0);
    CHECK(dev < prev);
    prev = dev;
  }
  spit("cli_lemma.json", lemma.out);
  const auto pass = invoke({"report", "cli_lemma.json"});
  CHECK(pass.code == kOk);
  CHECK(json::parse(pass.out)["pass"] == true);

  json bad = {{"command", "decompose"}, {"boundary_layer_share", 0.5}};
  spit("cli_bad.json", bad.dump());
  const auto fail = invoke({"report", "cli_lemma.json", "cli_bad.json"});
  CHECK(fail.code == kFailedVerdict);
  CHECK(json::parse(fail.out)["pass"] == false);
  spit("cli_garbage.json", "{not json");
  CHECK(invoke({"report", "cli_garbage.json"}).code == kIo);
}

TEST_CASE("config files") {
  RunConfig c;
  c.command = "simulate";
  c.d = 4;
  c.k = 2;
  c.c_grid = {0.0, 1.5};
  c.sides = {2.0, 0.5, 1.0, 1.0};
  c.region = "box";
  c.r = 0.25;
  c.inputs = {"a.json"};
  c.threads = 3;
  CHECK(config_from_json(to_json(c)) == c);
  CHECK(config_from_json(json::object()) == RunConfig{});
  json extra = to_json(c);
  extra["colour"] = "blue";
  CHECK_THROWS(config_from_json(extra));

  json file = {{"d", 2}, {"k", 1}, {"n", 5000.0}, {"c", 0.5}};
  spit("cli_config.json", file.dump());
  const auto r = invoke({"theory", "--config", "cli_config.json", "--k", "2", "--format", "json"});
  REQUIRE(r.code == kOk);
  const auto j = json::parse(r.out);
  CHECK(j["config"]["d"] == 2);
  CHECK(j["config"]["k"] == 2);  // flag wins
  CHECK(j["rows"][0]["n"].get<double>() == 5000.0);
  CHECK(invoke({"theory", "--config", "missing_config.json"}).code == kIo);
}

TEST_CASE("thread count from the environment") {
  ::setenv("RGGCRIT_THREADS", "5", 1);
  auto j = json::parse(invoke({"theory", "--format", "json"}).out);
  CHECK(j["config"]["threads"] == 5);
  j = json::parse(invoke({"theory", "--format", "json", "--threads", "2"}).out);
  CHECK(j["config"]["threads"] == 2);
  ::setenv("RGGCRIT_THREADS", "many", 1);
  CHECK(invoke({"theory"}).code == kUsage);
  ::unsetenv("RGGCRIT_THREADS");
}

TEST_CASE("grid parsing") {
  CHECK(parse_grid("0:1:3") == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(parse_grid("1e4,2.5") == std::vector<double>{1e4, 2.5});
  CHECK(parse_grid("3") == std::vector<double>{3.0});
  CHECK_THROWS(parse_grid("a:b"));
}
