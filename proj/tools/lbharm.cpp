#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "commands.hpp"
#include "config.hpp"
#include "lbharm/errors.hpp"

using nlohmann::json;

namespace {

struct Flags {
  std::string config_path;
  std::optional<double> alpha, s, a, b;
  std::vector<double> r;
  std::vector<double> e_lambda;
  std::vector<int> e_m;
  bool e_m_given = false;
  std::vector<std::string> test_family;
  std::optional<std::string> preset, check, f, g, method, output, format, baseline, function;
  std::optional<bool> refine;
  std::vector<double> x;
  std::optional<double> nu, lambda, t;
  std::optional<int> m;
  std::string verify;
};

// Flags given on the command line, as a merge patch over the config file.
json flags_patch(const Flags& fl) {
  json p = json::object();
  if (fl.alpha) p["alpha"] = *fl.alpha;
  if (fl.s) p["s"] = *fl.s;
  if (fl.a) p["a"] = *fl.a;
  if (fl.b) p["b"] = *fl.b;
  if (!fl.r.empty()) p["r"] = fl.r;
  if (!fl.test_family.empty()) p["test_family"] = fl.test_family;
  if (fl.preset) p["grid"]["preset"] = *fl.preset;
  if (fl.check) p["check"] = *fl.check;
  if (fl.f) p["f"] = *fl.f;
  if (fl.g) p["g"] = *fl.g;
  if (fl.method) p["convolution"]["method"] = *fl.method;
  if (fl.output) p["output"]["path"] = *fl.output;
  if (fl.format) p["output"]["format"] = *fl.format;
  if (fl.baseline) p["baseline"] = *fl.baseline;
  if (fl.refine) p["refine"] = *fl.refine;
  if (!fl.e_lambda.empty()) p["E"]["lambda"] = fl.e_lambda;
  if (fl.e_m_given) p["E"]["m"] = fl.e_m;
  if (fl.function) p["specfun"]["function"] = *fl.function;
  if (!fl.x.empty()) p["specfun"]["x"] = fl.x;
  if (fl.nu) p["specfun"]["nu"] = *fl.nu;
  if (fl.lambda) p["specfun"]["lambda"] = *fl.lambda;
  if (fl.t) p["specfun"]["t"] = *fl.t;
  if (fl.m) p["specfun"]["m"] = *fl.m;
  if (!fl.verify.empty()) p["verify"] = fl.verify;
  return p;
}

void add_common(CLI::App* sub, Flags& fl) {
  sub->add_option("--config", fl.config_path, "JSON configuration file");
  sub->add_option("--alpha", fl.alpha, "alpha >= 0");
  sub->add_option("--s", fl.s, "moment exponent s");
  sub->add_option("--a", fl.a, "space exponent a");
  sub->add_option("--b", fl.b, "spectral exponent b");
  sub->add_option("--r", fl.r, "dilation factors")->expected(1, -1);
  sub->add_option("--E-lambda", fl.e_lambda, "lambda range of E: LO HI")->expected(2);
  sub->add_option("--E-m", fl.e_m, "Laguerre indices of E")->expected(0, -1);
  sub->add_option("--test-family", fl.test_family, "test function names")->expected(1, -1);
  sub->add_option("--preset", fl.preset, "grid preset");
  sub->add_option("--check", fl.check, "subset of checks");
  sub->add_option("--f", fl.f, "first test function");
  sub->add_option("--g", fl.g, "second test function");
  sub->add_option("--method", fl.method, "convolution method: auto, direct, spectral");
  sub->add_option("--refine", fl.refine, "compute refined-grid error estimates");
  sub->add_option("--output", fl.output, "output file (stdout when omitted)");
  sub->add_option("--format", fl.format, "json or csv");
  sub->add_option("--baseline", fl.baseline, "baseline file for the heisenberg ratios");
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw lbharm::ConfigError("cannot read config file \"" + path + "\"");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw lbharm::ConfigError("config file \"" + path + "\" is not valid JSON: " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Laguerre-Bessel harmonic analysis and uncertainty inequality checks"};
  app.require_subcommand(1);
  Flags fl;
  std::vector<CLI::App*> subs;
  const std::map<std::string, std::string> about = {
      {"specfun", "special function identities and evaluations"},
      {"transform", "forward and inverse transform checks on the test family"},
      {"plancherel", "Plancherel defect"},
      {"convolve", "convolution checks"},
      {"young", "Young inequality ratios"},
      {"heat", "heat kernel and semigroup checks"},
      {"constants", "inequality constants"},
      {"verify", "run one named verification"},
      {"sweep", "run verifications over a parameter grid"}};
  for (const auto& name : lbharm::cli::command_names()) {
    const auto it = about.find(name);
    CLI::App* sub = app.add_subcommand(name, it == about.end() ? "" : it->second);
    add_common(sub, fl);
    subs.push_back(sub);
    if (name == "verify") {
      sub->add_option("name", fl.verify, "verification to run")->required();
    }
    if (name == "specfun") {
      sub->add_option("--function", fl.function, "gamma, bessel, laguerre, laguerre_function, eigenfunction");
      sub->add_option("--x", fl.x, "evaluation points")->expected(1, -1);
      sub->add_option("--nu", fl.nu, "Bessel order");
      sub->add_option("--lambda", fl.lambda, "eigenfunction lambda");
      sub->add_option("--t", fl.t, "eigenfunction t");
      sub->add_option("--m", fl.m, "Laguerre degree");
    }
  }

  // CLI11 fills a value-less "--E-m" with a default element, so the indices
  // are collected from argv; an empty list must reach the validator.
  std::vector<int> e_m;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) != "--E-m") continue;
    fl.e_m_given = true;
    for (int j = i + 1; j < argc; ++j) {
      char* end = nullptr;
      const long v = std::strtol(argv[j], &end, 10);
      if (end == argv[j] || *end != '\0') break;
      e_m.push_back(static_cast<int>(v));
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string command;
  for (auto* sub : subs) {
    if (sub->parsed()) command = sub->get_name();
  }
  if (fl.e_m_given) fl.e_m = e_m;

  lbharm::cli::RunConfig config;
  lbharm::cli::RunResult result;
  try {
    json doc = load_config(fl.config_path);
    if (!doc.is_object()) throw lbharm::ConfigError("config must be a JSON object");
    doc.merge_patch(flags_patch(fl));
    config = lbharm::cli::parse_config(doc);
    result = lbharm::cli::run(config, command);
  } catch (const lbharm::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const lbharm::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const lbharm::DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const lbharm::UnsupportedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  for (const auto& w : result.document["warnings"]) std::cerr << "warning: " << w.get<std::string>() << "\n";
  if (!lbharm::cli::write_output(config, result.document)) {
    std::cerr << "error: cannot write output \"" << config.output_path << "\"\n";
    return 3;
  }
  return result.exit_code;
}
