#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "wvarent_cli/cli.hpp"

using namespace wvarent::cli;

namespace {
struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Golden files live in the source tree; WVARENT_UPDATE_GOLDEN=1 rewrites them.
void check_golden(const std::string& name, const std::string& text) {
  const std::string path = std::string(WVARENT_GOLDEN_DIR) + "/" + name;
  const char* update = std::getenv("WVARENT_UPDATE_GOLDEN");
  if (update != nullptr && std::string(update) == "1") {
    std::ofstream(path, std::ios::binary) << text;
  }
  const std::string expected = slurp(path);
  REQUIRE_FALSE(expected.empty());
  CHECK(text == expected);
}

double csv_value(const std::string& csv, std::size_t row, std::size_t col) {
  std::istringstream in(csv);
  std::string line;
  for (std::size_t i = 0; i <= row; ++i) std::getline(in, line);
  std::istringstream cells(line);
  std::string cell;
  for (std::size_t i = 0; i <= col; ++i) std::getline(cells, cell, ',');
  return std::stod(cell);
}
}  // namespace

TEST_CASE("measure: uniform WVE is zero") {
  const auto r = run_cli({"measure", "--dist", "unif:a=0,b=1", "--weight", "x", "--measure", "WVE"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["rows"][0]["value"].get<double>() == 0.0);
  CHECK(j["config"]["subcommand"] == "measure");
}

TEST_CASE("residual: exponential WRVE") {
  const auto r = run_cli({"residual", "--dist", "exp:lambda=5.5", "--t", "0.1", "--measure", "WRVE"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("t,measure,value\n", 0) == 0);
  CHECK(std::abs(csv_value(r.out, 1, 2) - 0.39985) < 5e-5);
}

TEST_CASE("exit codes and error reports") {
  auto bad = run_cli({"residual", "--bogus"});
  CHECK(bad.code == 2);
  CHECK(nlohmann::json::parse(bad.err)["error"]["exit_code"] == 2);
  CHECK(run_cli({"residual", "--dist", "exp:lambda=1"}).code == 2);
  CHECK(run_cli({"residual", "--dist", "exp:lambda=x", "--t", "1"}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({}).code == 2);
  const auto degenerate = run_cli({"residual", "--dist", "exp:lambda=-1", "--t", "1"});
  CHECK(degenerate.code == 1);
  CHECK(nlohmann::json::parse(degenerate.err)["error"]["code"] == "DegenerateParameter");
  CHECK(run_cli({"residual", "--dist", "exp:lambda=1", "--t", "1", "--seed", "-3"}).code == 2);
  CHECK(run_cli({"residual", "--dist", "exp:lambda=1", "--t", "1", "--format", "xml"}).code == 2);
  const auto help = run_cli({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("simulate") != std::string::npos);
  CHECK(run_cli({"simulate", "--help"}).code == 0);
}

TEST_CASE("grid parsing") {
  CHECK(parse_grid("0.5") == std::vector<double>{0.5});
  CHECK(parse_grid("1,2,3") == std::vector<double>{1, 2, 3});
  const auto g = parse_grid("0:1:0.25");
  REQUIRE(g.size() == 5);
  CHECK(g.back() == doctest::Approx(1.0));
  CHECK_THROWS(parse_grid("1:0:0.1"));
  CHECK_THROWS(parse_grid("a,b"));
}

TEST_CASE("CSV quoting") {
  Table t{{"a", "b"}, {{std::string("x,y"), 1.5}, {std::string("say \"hi\""), std::monostate{}}}};
  std::ostringstream out;
  write_csv(t, out);
  CHECK(out.str() == "a,b\n\"x,y\",1.5\n\"say \"\"hi\"\"\",\n");
}

TEST_CASE("run configuration round trip") {
  RunConfig cfg;
  cfg.subcommand = "simulate";
  cfg.options = {{"dist", "exp:lambda=5.5"}, {"t", "0.1"}, {"n", "20"}, {"reps", "5"}};
  cfg.seed = 123456789012345ULL;
  cfg.quadrature.rel_tol = 1e-8;
  cfg.format = Format::Json;
  CHECK(run_config_from_json(to_json(cfg)) == cfg);
  CHECK_THROWS(run_config_from_json("{}"));

  const std::string path = "cli_saved_config.json";
  const auto first = run_cli({"simulate", "--dist", "exp:lambda=5.5", "--t", "0.1", "--n", "20", "--reps", "5",
                              "--seed", "9", "--save-config", path});
  REQUIRE(first.code == 0);
  const auto replay = run_cli({"--config", path});
  REQUIRE(replay.code == 0);
  CHECK(replay.out == first.out);
  CHECK(run_config_from_json(slurp(path)).seed == 9);
  std::remove(path.c_str());
}

TEST_CASE("seed falls back to the environment") {
  const std::vector<std::string> args{"simulate", "--dist", "exp:lambda=5.5", "--t", "0.1", "--n", "20", "--reps", "5"};
  const auto explicit_seed = [&] {
    auto a = args;
    a.insert(a.end(), {"--seed", "77"});
    return run_cli(a);
  }();
  ::setenv("WVARENT_SEED", "77", 1);
  const auto from_env = run_cli(args);
  ::unsetenv("WVARENT_SEED");
  CHECK(from_env.out == explicit_seed.out);
  CHECK(run_cli(args).out != explicit_seed.out);
}

TEST_CASE("simulate and estimate are deterministic under parallel execution") {
  const std::vector<std::string> sim{"simulate", "--dist", "exp:lambda=5.5", "--t", "0.1,0.2", "--n", "30,60",
                                     "--reps", "60", "--seed", "42"};
  auto with_threads = [](std::vector<std::string> a, const char* n) {
    a.insert(a.end(), {"--threads", n});
    return run_cli(a).out;
  };
  const std::string s1 = with_threads(sim, "1");
  CHECK(s1 == with_threads(sim, "4"));
  CHECK(s1 == with_threads(sim, "4"));
  const std::vector<std::string> est{"estimate", "--data", "builtin:covid", "--fitted",
                                     "logexp:alpha=2.4719,lambda=1.7619", "--t", "0.01,0.45", "--bn", "0.45",
                                     "--bootstrap", "50"};
  CHECK(with_threads(est, "1") == with_threads(est, "3"));
}

TEST_CASE("golden outputs on the builtin data sets") {
  const auto nano = run_cli({"estimate", "--data", "builtin:nano", "--fitted", "burr3:alpha=1.202347,beta=4.701481",
                             "--t", "0.01,0.3,0.7", "--bn", "0.999", "--bootstrap", "40", "--seed", "42"});
  REQUIRE(nano.code == 0);
  check_golden("estimate_nano.csv", nano.out);
  const auto covid = run_cli({"estimate", "--data", "builtin:covid", "--fitted", "logexp:alpha=2.4719,lambda=1.7619",
                              "--t", "0.01,0.25,0.45", "--bn", "0.45", "--bootstrap", "40", "--seed", "42"});
  REQUIRE(covid.code == 0);
  check_golden("estimate_covid.csv", covid.out);
  const auto erratum = run_cli({"erratum"});
  REQUIRE(erratum.code == 0);
  check_golden("erratum.csv", erratum.out);
}

TEST_CASE("other subcommands produce their tables") {
  const auto t = run_cli({"transform", "--dist", "exp:lambda=1", "--map", "affine:2,1", "--t", "2"});
  REQUIRE(t.code == 0);
  CHECK(t.out.find("affine_printed") != std::string::npos);
  const auto s = run_cli({"system", "--structure", "parallel:2", "--component", "power:k=2,b=1", "--bounds"});
  REQUIRE(s.code == 0);
  CHECK(s.out.find("beta1u") != std::string::npos);
  const auto p = run_cli({"phr", "--baseline", "exp:lambda=5.5", "--series-n", "1", "--t", "0.2"});
  REQUIRE(p.code == 0);
  CHECK(std::abs(csv_value(p.out, 1, 3) - 0.51331) < 5e-5);
  const auto c = run_cli({"curves", "--preset", "phr-exponential"});
  REQUIRE(c.code == 0);
  CHECK(c.out.find("phr(a=4)[exp:lambda=7]") != std::string::npos);
  CHECK(run_cli({"curves", "--preset", "nope"}).code == 2);
  const auto m = run_cli({"measure", "--probs", "0.5,0.2,0.3", "--measure", "WVE"});
  REQUIRE(m.code == 0);
  CHECK(std::abs(nlohmann::json::parse(m.out)["rows"][0]["value"].get<double>() - 1.92508329311) < 1e-10);
}

TEST_CASE("output file") {
  const std::string path = "cli_out_test.csv";
  REQUIRE(run_cli({"residual", "--dist", "exp:lambda=1", "--t", "1", "--out", path}).code == 0);
  CHECK(slurp(path).rfind("t,measure,value", 0) == 0);
  std::remove(path.c_str());
}
