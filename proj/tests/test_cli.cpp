#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "commands.hpp"
#include "config.hpp"
#include "lbharm/errors.hpp"
#include "report_io.hpp"

using namespace lbharm;
using namespace lbharm::cli;
using nlohmann::json;

namespace {

struct Exec {
  int code = -1;
  std::string out;
};

Exec run_tool(const std::string& args) {
  const std::string cmd = std::string(LBHARM_TOOL) + " " + args + " 2>/dev/null";
  Exec e;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) e.out.append(buf, n);
  const int status = pclose(pipe);
  e.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return e;
}

}  // namespace

TEST_CASE("config defaults round trip") {
  const RunConfig c = parse_config(std::string("{}"));
  CHECK(c.alpha == 0.0);
  CHECK(c.grid.preset == "default");
  CHECK(c.set.m_set.size() == 5);
  const json j = to_json(c);
  CHECK(to_json(parse_config(j)) == j);
  CHECK(c.tolerance("plancherel") == 1e-3);
  CHECK_THROWS_AS(c.tolerance("nonexistent"), ConfigError);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(parse_config(std::string(R"({"alpah": 1})")), ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(R"({"alpha": -1})")), ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(R"({"grid": {"panels": 0}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(R"({"grid": {"preset": "huge"}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(R"({"E": {"m": []}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(R"({"E": {"lambda": [1, 1]}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(R"({"verify": "local-small", "s": 3})")), ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(R"({"verify": "local-large", "s": 1})")), ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(R"({"verify": "local-critical", "s": 1})")), ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(R"({"alpha": 1, "convolution": {"method": "direct"}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(R"({"sweep": {"verify": ["local-small"], "s": [5]}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(R"({"exponents": [[1, 1, 2]]})")), ConfigError);
  CHECK_THROWS_AS(parse_config(std::string("{not json")), ConfigError);
  // An s admitted by one of the listed verifications is accepted.
  CHECK_NOTHROW(parse_config(std::string(R"({"sweep": {"verify": ["local-small", "lemma"], "s": [1, 5]}})")));
}

TEST_CASE("unknown key error names the valid keys") {
  try {
    parse_config(std::string(R"({"grid": {"lambda_maxx": 3}})"));
    FAIL("no error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("lambda_max") != std::string::npos);
  }
}

TEST_CASE("grid presets") {
  RunConfig c = parse_config(std::string("{}"));
  resolve_for_command(c, "heat");
  CHECK(c.grid.space.t_max == 36.0);
  RunConfig h = parse_config(std::string(R"({"verify": "heisenberg", "grid": {"mu_max": 100}})"));
  resolve_for_command(h, "verify");
  CHECK(h.grid.spectral.lambda_max == 32.0);
  CHECK(h.grid.spectral.mu_max == 100.0);
  RunConfig e = parse_config(std::string(R"({"grid": {"preset": "default"}})"));
  resolve_for_command(e, "heat");
  CHECK(e.grid.space.t_max == 12.0);
  const SpaceGridSpec r = refine(SpaceGridSpec{});
  CHECK(r.panels_x == 16);
}

TEST_CASE("thread count from the environment") {
  setenv("LBHARM_THREADS", "3", 1);
  CHECK(thread_count() == 3);
  setenv("LBHARM_THREADS", "zero", 1);
  CHECK_THROWS_AS(thread_count(), ConfigError);
  unsetenv("LBHARM_THREADS");
  CHECK(thread_count() >= 1);
}

TEST_CASE("csv output") {
  json doc = {{"reports", json::array({{{"name", "x"}, {"lhs", 1.5}, {"params", {{"s", 2}}}},
                                       {{"name", "y,z"}, {"rhs_oracle", nullptr}}})}};
  const std::string csv = reports_to_csv(doc);
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "lhs,name,params.s,rhs_oracle");
  std::string row;
  std::getline(in, row);
  CHECK(row == "1.5,x,2,");
  std::getline(in, row);
  CHECK(row == ",\"y,z\",,");
}

TEST_CASE("run: constants and specfun") {
  RunConfig c = parse_config(std::string(R"({"s": 4})"));
  const RunResult r = run(c, "constants");
  CHECK(r.exit_code == 0);
  CHECK(r.document["values"]["N"].get<double>() == doctest::Approx(std::acos(-1.0) / 16.0));
  CHECK(r.document["test_family_version"] == "1");
  RunResult small = run(parse_config(std::string(R"({"s": 1})")), "constants");
  CHECK(small.document["values"].contains("K"));
  const RunResult sf = run(parse_config(std::string(R"({"specfun": {"function": "bessel", "nu": 0.5, "x": [0, 3.14159]}})")), "specfun");
  CHECK(sf.exit_code == 0);
  CHECK(sf.document["values"]["evaluations"].size() == 2);
}

TEST_CASE("run: failed checks set exit code 1") {
  const RunResult r = run(parse_config(std::string(R"({"tolerances": {"specfun_bessel": 1e-30}})")), "specfun");
  CHECK(r.exit_code == 1);
  CHECK_FALSE(r.document["passed"].get<bool>());
}

TEST_CASE("tool exit codes") {
  CHECK(run_tool("constants --s 4").code == 0);
  CHECK(run_tool("constants --alpha -1").code == 2);
  CHECK(run_tool("verify local-small --s 5").code == 2);
  CHECK(run_tool("verify local-small --E-m").code == 2);
  CHECK(run_tool("verify nosuch").code == 2);
  CHECK(run_tool("frobnicate").code == 2);
  CHECK(run_tool("constants --output /nonexistent-dir/out.json").code == 3);
  CHECK(run_tool("specfun --config /nonexistent.json").code == 2);
}

TEST_CASE("tool output is deterministic") {
  const Exec a = run_tool("verify lemma --test-family gauss extremal");
  const Exec b = run_tool("verify lemma --test-family gauss extremal");
  REQUIRE(a.code == 0);
  CHECK(strip_runtime(json::parse(a.out)).dump() == strip_runtime(json::parse(b.out)).dump());
  const Exec csv = run_tool("verify lemma --test-family gauss --format csv");
  CHECK(csv.out.rfind("grid.", 0) == 0);
}

TEST_CASE("tool writes to a file") {
  const auto path = std::filesystem::temp_directory_path() / "lbharm_cli_test.json";
  std::filesystem::remove(path);
  CHECK(run_tool("constants --s 4 --output " + path.string()).code == 0);
  std::ifstream in(path);
  CHECK(json::parse(in)["command"] == "constants");
  std::filesystem::remove(path);
}
