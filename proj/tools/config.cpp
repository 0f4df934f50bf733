#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "lbharm/errors.hpp"
#include "lbharm/test_family.hpp"

namespace lbharm::cli {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

void check_keys(const json& obj, const std::string& where, const std::vector<std::string>& valid) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(valid.begin(), valid.end(), key) == valid.end()) {
      throw ConfigError("unknown key \"" + key + "\" in " + where + "; valid keys: " + join(valid));
    }
  }
}

double number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("\"" + key + "\" must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError("\"" + key + "\" must be finite");
  return x;
}

double positive(const json& v, const std::string& key) {
  const double x = number(v, key);
  if (!(x > 0.0)) throw ConfigError("\"" + key + "\" must be positive");
  return x;
}

int count(const json& v, const std::string& key, int min = 1) {
  if (!v.is_number_integer()) throw ConfigError("\"" + key + "\" must be an integer");
  const int n = v.get<int>();
  if (n < min) throw ConfigError("\"" + key + "\" must be >= " + std::to_string(min));
  return n;
}

bool boolean(const json& v, const std::string& key) {
  if (!v.is_boolean()) throw ConfigError("\"" + key + "\" must be true or false");
  return v.get<bool>();
}

std::string text(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError("\"" + key + "\" must be a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const json& v, const std::string& key) {
  if (v.is_number()) return {number(v, key)};
  if (!v.is_array()) throw ConfigError("\"" + key + "\" must be a number or a list of numbers");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(number(x, key));
  return out;
}

std::vector<std::string> strings(const json& v, const std::string& key) {
  if (v.is_string()) return {v.get<std::string>()};
  if (!v.is_array()) throw ConfigError("\"" + key + "\" must be a string or a list of strings");
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(text(x, key));
  return out;
}

std::string one_of(const std::string& value, const std::string& key,
                   const std::vector<std::string>& choices) {
  if (std::find(choices.begin(), choices.end(), value) == choices.end()) {
    throw ConfigError("\"" + key + "\" must be one of: " + join(choices) + " (got \"" + value + "\")");
  }
  return value;
}

const std::vector<std::string> kTopKeys = {
    "alpha", "grid", "test_family", "s", "a", "b", "r", "E", "verify", "check", "refine", "f", "g",
    "exponents", "convolution", "specfun", "sweep", "output", "tolerances", "baseline"};
const std::vector<std::string> kGridKeys = {
    "preset", "x_max", "t_max", "panels", "panels_x", "panels_t", "nodes_per_panel", "lambda_max",
    "mu_max", "m_max", "spectral_panels", "spectral_nodes_per_panel", "m_tail", "gamma_norm",
    "graded", "graded_tail", "graded_first_width", "graded_ratio", "graded_extent"};
const std::vector<std::string> kPresets = {"default", "heat", "heisenberg", "graded"};

SpectralSet parse_set(const json& v) {
  check_keys(v, "E", {"lambda", "m"});
  SpectralSet set{0.0, 1.0, {0, 1, 2, 3, 4}};
  if (v.contains("lambda")) {
    const auto range = numbers(v["lambda"], "E.lambda");
    if (range.size() != 2) throw ConfigError("\"E.lambda\" must be [lambda_lo, lambda_hi]");
    set.lambda_lo = range[0];
    set.lambda_hi = range[1];
  }
  if (v.contains("m")) {
    if (!v["m"].is_array()) throw ConfigError("\"E.m\" must be a list of integers");
    set.m_set.clear();
    for (const auto& m : v["m"]) set.m_set.insert(count(m, "E.m", 0));
  }
  if (!(set.lambda_lo >= 0.0) || !(set.lambda_hi > set.lambda_lo) || set.m_set.empty()) {
    throw ConfigError("E must be nonempty: requires 0 <= lambda_lo < lambda_hi and at least one m");
  }
  return set;
}

json set_to_json(const SpectralSet& set) {
  return {{"lambda", {set.lambda_lo, set.lambda_hi}},
          {"m", std::vector<int>(set.m_set.begin(), set.m_set.end())}};
}

void apply_grid_overrides(GridConfig& grid) {
  const json& o = grid.overrides;
  SpaceGridSpec& sp = grid.space;
  SpectralGridSpec& sg = grid.spectral;
  if (o.contains("x_max")) sp.x_max = positive(o["x_max"], "grid.x_max");
  if (o.contains("t_max")) sp.t_max = positive(o["t_max"], "grid.t_max");
  if (o.contains("panels")) sp.panels_x = sp.panels_t = count(o["panels"], "grid.panels");
  if (o.contains("panels_x")) sp.panels_x = count(o["panels_x"], "grid.panels_x");
  if (o.contains("panels_t")) sp.panels_t = count(o["panels_t"], "grid.panels_t");
  if (o.contains("nodes_per_panel")) {
    sp.nodes_per_panel = sg.nodes_per_panel = count(o["nodes_per_panel"], "grid.nodes_per_panel");
    grid.graded.nodes_per_panel = sp.nodes_per_panel;
  }
  if (o.contains("lambda_max")) sg.lambda_max = positive(o["lambda_max"], "grid.lambda_max");
  if (o.contains("mu_max")) sg.mu_max = positive(o["mu_max"], "grid.mu_max");
  if (o.contains("m_max")) sg.m_max = count(o["m_max"], "grid.m_max", 0);
  if (o.contains("spectral_panels")) sg.panels = count(o["spectral_panels"], "grid.spectral_panels");
  if (o.contains("spectral_nodes_per_panel")) {
    sg.nodes_per_panel = count(o["spectral_nodes_per_panel"], "grid.spectral_nodes_per_panel");
  }
  if (o.contains("m_tail")) sg.m_tail = boolean(o["m_tail"], "grid.m_tail");
  if (o.contains("gamma_norm")) {
    const std::string name = text(o["gamma_norm"], "grid.gamma_norm");
    one_of(name, "grid.gamma_norm", {"plancherel", "paper"});
    sg.norm = parse_gamma_norm(name);
  }
  if (o.contains("graded")) sp.graded = boolean(o["graded"], "grid.graded");
  if (o.contains("graded_tail")) grid.graded_tail = boolean(o["graded_tail"], "grid.graded_tail");
  SpaceGridSpec& gr = grid.graded;
  if (o.contains("graded_first_width")) {
    gr.graded_first_width = positive(o["graded_first_width"], "grid.graded_first_width");
  }
  if (o.contains("graded_ratio")) {
    gr.graded_ratio = number(o["graded_ratio"], "grid.graded_ratio");
    if (!(gr.graded_ratio >= 1.0)) throw ConfigError("\"grid.graded_ratio\" must be >= 1");
  }
  if (o.contains("graded_extent")) gr.x_max = gr.t_max = positive(o["graded_extent"], "grid.graded_extent");
  if (grid.preset == "graded") {
    sp.graded_first_width = gr.graded_first_width;
    sp.graded_ratio = gr.graded_ratio;
    if (!o.contains("x_max")) sp.x_max = gr.x_max;
    if (!o.contains("t_max")) sp.t_max = gr.t_max;
  }
}

GridConfig build_grid(const std::string& preset, const json& overrides, bool explicit_preset) {
  GridConfig grid = grid_preset(preset);
  grid.preset_explicit = explicit_preset;
  grid.overrides = overrides;
  apply_grid_overrides(grid);
  return grid;
}

YoungExponents parse_exponents(const json& v) {
  const auto e = numbers(v, "exponents");
  if (e.size() != 3) throw ConfigError("each entry of \"exponents\" must be [p, q, r]");
  const YoungExponents out{e[0], e[1], e[2]};
  if (!(out.p >= 1.0) || !(out.q >= 1.0) || !(out.r >= 1.0)) {
    throw ConfigError("exponents must satisfy p, q, r >= 1");
  }
  if (std::fabs(1.0 / out.p + 1.0 / out.q - 1.0 - 1.0 / out.r) > 1e-12) {
    throw ConfigError("exponents must satisfy 1/p + 1/q = 1 + 1/r");
  }
  return out;
}

// Precondition on s for one verification.
void check_s(const std::string& verify, double s, double d) {
  const std::string ds = std::to_string(d);
  if (verify == "local-small" || verify == "profile") {
    if (!(s > 0.0 && s < d)) {
      throw ConfigError(verify + " requires 0 < s < 3 alpha + 2 = " + ds + " (got s = " + std::to_string(s) + ")");
    }
  } else if (verify == "local-large" || verify == "lemma" || verify == "lemma-extremal") {
    if (!(s > d)) {
      throw ConfigError(verify + " requires s > 3 alpha + 2 = " + ds + " (got s = " + std::to_string(s) + ")");
    }
  } else if (verify == "interpolation") {
    if (!(s > 1.0)) throw ConfigError("interpolation requires s > 1 (got s = " + std::to_string(s) + ")");
  } else if (verify == "local-critical") {
    if (std::fabs(s - d) > 1e-12) {
      throw ConfigError("local-critical fixes s = 3 alpha + 2 = " + ds + " (got s = " + std::to_string(s) + ")");
    }
  }
}

}  // namespace

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> tol = {
      {"specfun_bessel", 1e-12},    {"specfun_recurrence", 1e-10}, {"specfun_generating", 1e-10},
      {"specfun_bound", 1e-12},     {"pde_d1", 1e-5},              {"pde_d2", 1e-4},
      {"plancherel", 1e-3},         {"round_trip", 1e-2},          {"convolution_agreement", 1e-2},
      {"commutativity", 1e-12},     {"heat_mass", 1e-3},           {"heat_negativity", 1e-3},
      {"heat_semigroup", 1e-10},    {"heat_norm", 1e-2},           {"heat_pde", 1e-2},
      {"lemma_equality", 1e-4},     {"dilation", 1e-3},            {"profile_identity", 1e-12},
      {"profile_argmin", 1e-6},     {"baseline_factor", 0.99},     {"lambda0_identity", 1e-12},
      {"heat_norm_spectral", 1e-4}, {"constants_identity", 1e-13}};
  return tol;
}

double RunConfig::tolerance(const std::string& name) const {
  const auto it = tolerances.find(name);
  if (it != tolerances.end()) return it->second;
  const auto def = default_tolerances().find(name);
  if (def == default_tolerances().end()) throw ConfigError("unknown tolerance \"" + name + "\"");
  return def->second;
}

const std::vector<std::string>& verify_names() {
  static const std::vector<std::string> names = {
      "heisenberg", "interpolation", "local-small", "local-large", "local-critical",
      "lemma",      "lemma-extremal", "profile"};
  return names;
}

GridConfig grid_preset(const std::string& name) {
  one_of(name, "grid.preset", kPresets);
  GridConfig grid;
  grid.preset = name;
  grid.graded.graded = true;
  grid.graded.x_max = grid.graded.t_max = 400.0;
  grid.graded.graded_first_width = 0.25;
  grid.graded.graded_ratio = 1.2;
  if (name == "heat") {
    grid.space.t_max = 36.0;
    grid.space.panels_t = 24;
    grid.spectral.panels = 32;
  } else if (name == "heisenberg") {
    grid.space.x_max = 10.0;
    grid.space.panels_x = 16;
    grid.space.t_max = 20.0;
    grid.space.panels_t = 40;
    grid.spectral.lambda_max = 32.0;
    grid.spectral.mu_max = 160.0;
    grid.spectral.panels = 32;
  } else if (name == "graded") {
    grid.space = grid.graded;
  }
  return grid;
}

SpaceGridSpec refine(const SpaceGridSpec& spec) {
  SpaceGridSpec out = spec;
  if (spec.graded) {
    out.x_max *= 2.0;
    out.t_max *= 2.0;
    out.graded_first_width *= 0.5;
    out.graded_ratio = 1.0 + 0.5 * (spec.graded_ratio - 1.0);
  } else {
    out.panels_x *= 2;
    out.panels_t *= 2;
  }
  return out;
}

SpectralGridSpec refine(const SpectralGridSpec& spec) {
  SpectralGridSpec out = spec;
  out.panels *= 2;
  out.mu_max *= 2.0;
  out.m_max *= 2;
  return out;
}

RunConfig parse_config(const std::string& text_in) {
  if (text_in.find_first_not_of(" \t\r\n") == std::string::npos) return parse_config(json::object());
  json doc;
  try {
    doc = json::parse(text_in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

namespace {

// A null value means "unset", so to_json output parses back.
json or_null(const std::string& v) { return v.empty() ? json(nullptr) : json(v); }

json drop_nulls(const json& in) {
  if (!in.is_object()) return in;
  json out = json::object();
  for (const auto& [key, value] : in.items()) {
    if (!value.is_null()) out[key] = drop_nulls(value);
  }
  return out;
}

}  // namespace

RunConfig parse_config(const json& doc_in) {
  if (!doc_in.is_object()) throw ConfigError("config must be a JSON object");
  const json doc = drop_nulls(doc_in);
  check_keys(doc, "config", kTopKeys);
  RunConfig c;
  if (doc.contains("alpha")) {
    c.alpha = number(doc["alpha"], "alpha");
    if (!(c.alpha >= 0.0)) throw ConfigError("\"alpha\" must be >= 0");
  }
  const double d = 3.0 * c.alpha + 2.0;

  json grid_overrides = json::object();
  std::string preset = "default";
  bool preset_explicit = false;
  if (doc.contains("grid")) {
    check_keys(doc["grid"], "grid", kGridKeys);
    for (const auto& [key, value] : doc["grid"].items()) {
      if (key == "preset") {
        preset = one_of(text(value, "grid.preset"), "grid.preset", kPresets);
        preset_explicit = true;
      } else {
        grid_overrides[key] = value;
      }
    }
  }
  c.grid = build_grid(preset, grid_overrides, preset_explicit);

  if (doc.contains("test_family")) {
    auto names = strings(doc["test_family"], "test_family");
    const auto known = family_names();
    for (const auto& n : names) one_of(n, "test_family", known);
    if (names.empty()) throw ConfigError("\"test_family\" must not be empty");
    c.test_family = std::move(names);
  }
  if (doc.contains("s")) c.s = positive(doc["s"], "s");
  if (doc.contains("a")) c.a = positive(doc["a"], "a");
  if (doc.contains("b")) c.b = positive(doc["b"], "b");
  if (doc.contains("r")) {
    c.r = numbers(doc["r"], "r");
    for (double r : c.r) {
      if (!(r > 0.0)) throw ConfigError("dilation factors \"r\" must be positive");
    }
  }
  if (doc.contains("E")) c.set = parse_set(doc["E"]);
  if (doc.contains("verify")) c.verify = one_of(text(doc["verify"], "verify"), "verify", verify_names());
  if (doc.contains("check")) {
    c.check = one_of(text(doc["check"], "check"), "check", {"all", "mass", "semigroup", "norm", "pde"});
  }
  if (doc.contains("refine")) c.refine = boolean(doc["refine"], "refine");
  const auto known = family_names();
  if (doc.contains("f")) c.f = one_of(text(doc["f"], "f"), "f", known);
  if (doc.contains("g")) c.g = one_of(text(doc["g"], "g"), "g", known);
  if (doc.contains("exponents")) {
    const json& e = doc["exponents"];
    if (!e.is_array() || e.empty()) throw ConfigError("\"exponents\" must be a non-empty list");
    c.exponents.clear();
    if (e[0].is_number()) {
      c.exponents.push_back(parse_exponents(e));
    } else {
      for (const auto& item : e) c.exponents.push_back(parse_exponents(item));
    }
  }
  if (doc.contains("convolution")) {
    const json& v = doc["convolution"];
    check_keys(v, "convolution",
               {"method", "output_max", "output_panels", "output_nodes", "integration_max",
                "integration_panels", "integration_nodes", "n_theta"});
    ConvolutionConfig& cv = c.convolution;
    if (v.contains("method")) {
      cv.method = one_of(text(v["method"], "convolution.method"), "convolution.method",
                         {"auto", "direct", "spectral"});
    }
    if (v.contains("output_max")) cv.output_max = positive(v["output_max"], "convolution.output_max");
    if (v.contains("output_panels")) cv.output_panels = count(v["output_panels"], "convolution.output_panels");
    if (v.contains("output_nodes")) cv.output_nodes = count(v["output_nodes"], "convolution.output_nodes");
    if (v.contains("integration_max")) {
      cv.integration_max = positive(v["integration_max"], "convolution.integration_max");
    }
    if (v.contains("integration_panels")) {
      cv.integration_panels = count(v["integration_panels"], "convolution.integration_panels");
    }
    if (v.contains("integration_nodes")) {
      cv.integration_nodes = count(v["integration_nodes"], "convolution.integration_nodes");
    }
    if (v.contains("n_theta")) cv.n_theta = count(v["n_theta"], "convolution.n_theta");
  }
  if (c.convolution.method == "direct" && c.alpha != 0.0) {
    throw ConfigError("direct convolution requires alpha = 0");
  }
  if (doc.contains("specfun")) {
    const json& v = doc["specfun"];
    check_keys(v, "specfun", {"function", "nu", "m", "lambda", "t", "x"});
    SpecfunConfig& sf = c.specfun;
    if (v.contains("function")) {
      sf.function = one_of(text(v["function"], "specfun.function"), "specfun.function",
                           {"gamma", "bessel", "laguerre", "laguerre_function", "eigenfunction"});
    }
    if (v.contains("nu")) {
      sf.nu = number(v["nu"], "specfun.nu");
      if (!(sf.nu >= -0.5)) throw ConfigError("\"specfun.nu\" must be >= -1/2");
    }
    if (v.contains("m")) sf.m = count(v["m"], "specfun.m", 0);
    if (v.contains("lambda")) {
      sf.lambda = number(v["lambda"], "specfun.lambda");
      if (!(sf.lambda >= 0.0)) throw ConfigError("\"specfun.lambda\" must be >= 0");
    }
    if (v.contains("t")) {
      sf.t = number(v["t"], "specfun.t");
      if (!(sf.t >= 0.0)) throw ConfigError("\"specfun.t\" must be >= 0");
    }
    if (v.contains("x")) sf.x = numbers(v["x"], "specfun.x");
  }
  if (doc.contains("sweep")) {
    const json& v = doc["sweep"];
    check_keys(v, "sweep", {"verify", "s", "a", "b", "E"});
    SweepConfig& sw = c.sweep;
    if (v.contains("verify")) {
      for (const auto& n : strings(v["verify"], "sweep.verify")) {
        sw.verify.push_back(one_of(n, "sweep.verify", verify_names()));
      }
    }
    if (v.contains("s")) {
      sw.s = numbers(v["s"], "sweep.s");
      for (double s : sw.s) {
        if (!(s > 0.0)) throw ConfigError("\"sweep.s\" values must be positive");
      }
    }
    if (v.contains("a")) {
      sw.a = numbers(v["a"], "sweep.a");
      for (double a : sw.a) {
        if (!(a > 0.0)) throw ConfigError("\"sweep.a\" values must be positive");
      }
    }
    if (v.contains("b")) {
      sw.b = numbers(v["b"], "sweep.b");
      for (double b : sw.b) {
        if (!(b > 0.0)) throw ConfigError("\"sweep.b\" values must be positive");
      }
    }
    if (v.contains("E")) {
      if (!v["E"].is_array()) throw ConfigError("\"sweep.E\" must be a list of sets");
      for (const auto& e : v["E"]) sw.sets.push_back(parse_set(e));
    }
    // Each s runs for the verifications whose range admits it; one that no
    // listed verification admits is an error.
    const std::vector<std::string> names =
        sw.verify.empty() ? std::vector<std::string>{"local-small", "local-large", "lemma"} : sw.verify;
    for (double s : sw.s) {
      std::string reasons;
      bool admitted = false;
      for (const auto& name : names) {
        if (name == "local-critical" || name == "heisenberg") continue;
        try {
          check_s(name, s, d);
          admitted = true;
        } catch (const ConfigError& e) {
          reasons += std::string(reasons.empty() ? "" : "; ") + e.what();
        }
      }
      if (!admitted && !reasons.empty()) throw ConfigError(reasons);
    }
  }
  if (doc.contains("output")) {
    const json& v = doc["output"];
    check_keys(v, "output", {"path", "format"});
    if (v.contains("path")) c.output_path = text(v["path"], "output.path");
    if (v.contains("format")) {
      c.output_format = one_of(text(v["format"], "output.format"), "output.format", {"json", "csv"});
    }
  }
  if (doc.contains("tolerances")) {
    const json& v = doc["tolerances"];
    if (!v.is_object()) throw ConfigError("\"tolerances\" must be an object");
    std::vector<std::string> valid;
    for (const auto& [k, _] : default_tolerances()) valid.push_back(k);
    check_keys(v, "tolerances", valid);
    for (const auto& [k, value] : v.items()) c.tolerances[k] = positive(value, "tolerances." + k);
  }
  if (doc.contains("baseline")) c.baseline = text(doc["baseline"], "baseline");

  if (!c.verify.empty() && c.s) check_s(c.verify, *c.s, d);
  return c;
}

void resolve_for_command(RunConfig& config, const std::string& command) {
  if (config.grid.preset_explicit) return;
  std::string preset = "default";
  if (command == "heat") preset = "heat";
  if (command == "verify" && config.verify == "heisenberg") preset = "heisenberg";
  if (preset != config.grid.preset) config.grid = build_grid(preset, config.grid.overrides, false);
}

json to_json(const RunConfig& c) {
  const SpaceGridSpec& sp = c.grid.space;
  const SpectralGridSpec& sg = c.grid.spectral;
  json grid = {{"preset", c.grid.preset},
               {"x_max", sp.x_max},
               {"t_max", sp.t_max},
               {"panels_x", sp.panels_x},
               {"panels_t", sp.panels_t},
               {"nodes_per_panel", sp.nodes_per_panel},
               {"graded", sp.graded},
               {"lambda_max", sg.lambda_max},
               {"mu_max", sg.mu_max},
               {"m_max", sg.m_max},
               {"spectral_panels", sg.panels},
               {"spectral_nodes_per_panel", sg.nodes_per_panel},
               {"m_tail", sg.m_tail},
               {"gamma_norm", to_string(sg.norm)},
               {"graded_tail", c.grid.graded_tail},
               {"graded_first_width", c.grid.graded.graded_first_width},
               {"graded_ratio", c.grid.graded.graded_ratio},
               {"graded_extent", c.grid.graded.x_max}};
  json exps = json::array();
  for (const auto& e : c.exponents) exps.push_back({e.p, e.q, e.r});
  json sets = json::array();
  for (const auto& s : c.sweep.sets) sets.push_back(set_to_json(s));
  json tol = default_tolerances();
  for (const auto& [k, v] : c.tolerances) tol[k] = v;
  const ConvolutionConfig& cv = c.convolution;
  json out = {
      {"alpha", c.alpha},
      {"grid", grid},
      {"test_family", c.test_family ? json(*c.test_family) : json(nullptr)},
      {"s", c.s ? json(*c.s) : json(nullptr)},
      {"a", c.a},
      {"b", c.b},
      {"r", c.r},
      {"E", set_to_json(c.set)},
      {"verify", or_null(c.verify)},
      {"check", or_null(c.check)},
      {"refine", c.refine ? json(*c.refine) : json(nullptr)},
      {"f", or_null(c.f)},
      {"g", or_null(c.g)},
      {"exponents", exps},
      {"convolution",
       {{"method", cv.method},
        {"output_max", cv.output_max},
        {"output_panels", cv.output_panels},
        {"output_nodes", cv.output_nodes},
        {"integration_max", cv.integration_max},
        {"integration_panels", cv.integration_panels},
        {"integration_nodes", cv.integration_nodes},
        {"n_theta", cv.n_theta}}},
      {"specfun",
       {{"function", or_null(c.specfun.function)},
        {"nu", c.specfun.nu},
        {"m", c.specfun.m},
        {"lambda", c.specfun.lambda},
        {"t", c.specfun.t},
        {"x", c.specfun.x}}},
      {"sweep", {{"verify", c.sweep.verify}, {"s", c.sweep.s}, {"a", c.sweep.a}, {"b", c.sweep.b}, {"E", sets}}},
      {"output", {{"path", c.output_path}, {"format", c.output_format}}},
      {"tolerances", tol},
      {"baseline", c.baseline}};
  return out;
}

int thread_count() {
  const char* env = std::getenv("LBHARM_THREADS");
  if (!env || !*env) return std::max(1u, std::thread::hardware_concurrency());
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1 || n > 4096) {
    throw ConfigError("LBHARM_THREADS must be a positive integer (got \"" + std::string(env) + "\")");
  }
  return static_cast<int>(n);
}

}  // namespace lbharm::cli
