#pragma once

// Run configuration of the lbharm command line tool.
//
// The configuration is a JSON object; command-line flags are merged into it
// as a JSON merge patch before parsing, so both paths share one validator.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "lbharm/measure.hpp"
#include "lbharm/transform.hpp"

namespace lbharm::cli {

struct GridConfig {
  // default | heat | heisenberg | graded
  std::string preset = "default";
  bool preset_explicit = false;
  // Explicit grid keys, applied on top of the preset.
  nlohmann::json overrides = nlohmann::json::object();
  SpaceGridSpec space;
  SpectralGridSpec spectral;
  // Slowly decaying test functions are evaluated on the graded grid below.
  bool graded_tail = true;
  SpaceGridSpec graded;
};

struct ConvolutionConfig {
  // auto: direct at alpha = 0, spectral otherwise.
  std::string method = "auto";
  double output_max = 8.0;
  int output_panels = 4;
  int output_nodes = 10;
  double integration_max = 6.0;
  int integration_panels = 3;
  int integration_nodes = 10;
  int n_theta = 24;
};

struct SpecfunConfig {
  // Empty: only the property checks run.
  std::string function;
  double nu = -0.5;
  int m = 0;
  double lambda = 1.0;
  double t = 0.0;
  std::vector<double> x;
};

struct SweepConfig {
  std::vector<std::string> verify;
  std::vector<double> s;
  std::vector<double> a;
  std::vector<double> b;
  std::vector<SpectralSet> sets;
};

struct RunConfig {
  double alpha = 0.0;
  GridConfig grid;
  std::optional<std::vector<std::string>> test_family;
  std::optional<double> s;
  double a = 1.0;
  double b = 1.0;
  std::vector<double> r;
  SpectralSet set{0.0, 1.0, {0, 1, 2, 3, 4}};
  std::string verify;
  std::string check = "all";
  std::optional<bool> refine;
  std::string f = "gauss";
  std::string g = "gauss-aniso";
  std::vector<YoungExponents> exponents{{1.0, 1.0, 1.0}, {1.0, 2.0, 2.0}};
  ConvolutionConfig convolution;
  SpecfunConfig specfun;
  SweepConfig sweep;
  std::string output_path;
  std::string output_format = "json";
  std::map<std::string, double> tolerances;
  std::string baseline;

  double tolerance(const std::string& name) const;
};

/// Default tolerance of every check, by name.
const std::map<std::string, double>& default_tolerances();

const std::vector<std::string>& verify_names();

RunConfig parse_config(const std::string& text);
RunConfig parse_config(const nlohmann::json& doc);

/// The configuration with every default filled in.
nlohmann::json to_json(const RunConfig& config);

/// Applies the grid preset (unless one was chosen explicitly) for `command`.
void resolve_for_command(RunConfig& config, const std::string& command);

/// Preset values of the space and spectral grids.
GridConfig grid_preset(const std::string& name);

/// Refined versions used for grid error estimates.
SpaceGridSpec refine(const SpaceGridSpec& spec);
SpectralGridSpec refine(const SpectralGridSpec& spec);

/// Reads LBHARM_THREADS; hardware concurrency when unset.
int thread_count();

}  // namespace lbharm::cli
