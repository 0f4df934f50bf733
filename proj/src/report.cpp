#include "lbharm/report.hpp"

#include <algorithm>
#include <cmath>

namespace lbharm {

namespace {

double safe_ratio(double lhs, double rhs) {
  if (rhs == 0.0) return lhs == 0.0 ? 0.0 : INFINITY;
  return lhs / rhs;
}

}  // namespace

void InequalityReport::finalize() {
  ratio_paper = safe_ratio(lhs, rhs_paper);
  if (rhs_oracle) ratio_oracle = safe_ratio(lhs, *rhs_oracle);
  strict = kind == Kind::upper && deciding_ratio() < 1.0 - grid_error_estimate;
}

double InequalityReport::deciding_ratio() const {
  if (!ratio_oracle) return ratio_paper;
  if (kind == Kind::equality) return *ratio_oracle;
  // Lower bounds are decided against the larger right-hand side.
  return kind == Kind::lower ? std::min(ratio_paper, *ratio_oracle)
                             : std::max(ratio_paper, *ratio_oracle);
}

bool InequalityReport::satisfied() const {
  const double r = deciding_ratio();
  switch (kind) {
    case Kind::upper: return r <= 1.0 + grid_error_estimate;
    case Kind::lower: return r > 0.0 && std::isfinite(r);
    case Kind::equality: {
      const auto it = values.find("tolerance");
      const double tol = it != values.end() ? it->second : grid_error_estimate;
      return std::fabs(r - 1.0) <= tol;
    }
  }
  return false;
}

std::string to_string(InequalityReport::Kind kind) {
  switch (kind) {
    case InequalityReport::Kind::upper: return "upper";
    case InequalityReport::Kind::lower: return "lower";
    case InequalityReport::Kind::equality: return "equality";
  }
  return "upper";
}

}  // namespace lbharm
