#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lbharm {

/// Both sides of one inequality evaluated numerically.
///
/// For upper bounds (lhs <= rhs) the deciding ratio is the larger of the
/// paper and oracle ratios, i.e. the comparison against the smaller
/// right-hand side.
struct InequalityReport {
  enum class Kind { upper, lower, equality };

  std::string name;
  Kind kind = Kind::upper;
  double lhs = 0.0;
  double rhs_paper = 0.0;
  std::optional<double> rhs_oracle;
  double ratio_paper = 0.0;
  std::optional<double> ratio_oracle;
  bool strict = false;
  double grid_error_estimate = 0.0;
  std::map<std::string, double> params;
  std::map<std::string, std::string> labels;
  std::map<std::string, double> values;
  std::map<std::string, std::string> grid;
  double runtime_ms = 0.0;

  /// Fill the ratios and the strict flag from lhs and the right-hand sides.
  void finalize();

  double deciding_ratio() const;
  /// Upper bounds: deciding ratio <= 1 + grid_error_estimate.
  bool satisfied() const;
};

std::string to_string(InequalityReport::Kind kind);

}  // namespace lbharm
