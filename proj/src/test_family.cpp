#include "lbharm/test_family.hpp"

#include <cmath>

namespace lbharm {

namespace {

double gauss(double x, double t) { return std::exp(-(x * x + t * t)); }

}  // namespace

SpaceFunction extremal_function(double s, double a, double b) {
  if (!(s > 0.0) || !(a > 0.0) || !(b > 0.0)) throw DomainError("extremal_function: s, a, b must be positive");
  return [s, a, b](double x, double t) {
    return 1.0 / (a + b * std::pow(homogeneous_norm(x, t), 2.0 * s));
  };
}

std::vector<std::string> family_names() {
  return {"gauss", "gauss-aniso", "gauss-dilated-0.5", "gauss-dilated-1.5", "laguerre-gauss",
          "extremal", "extremal-perturbed"};
}

TestFunction family_member(const AlphaContext& ctx, const std::string& name, double s_extremal) {
  if (name == "gauss") return {name, gauss};
  if (name == "gauss-aniso") {
    return {name, [](double x, double t) { return std::exp(-(0.5 * x * x + 2.0 * t * t)); }};
  }
  if (name == "gauss-dilated-0.5") return {name, dilate_normalized(ctx, 0.5, gauss)};
  if (name == "gauss-dilated-1.5") return {name, dilate_normalized(ctx, 1.5, gauss)};
  if (name == "laguerre-gauss") {
    const double a = ctx.alpha();
    return {name, [a](double x, double t) { return laguerre_poly(2, a, 2.0 * x * x) * gauss(x, t); }};
  }
  if (name == "extremal") return {name, extremal_function(s_extremal), true};
  if (name == "extremal-perturbed") {
    auto e = extremal_function(s_extremal);
    return {name, [e](double x, double t) { return e(x, t) * std::exp(-0.1 * (x * x + t * t)); }, true};
  }
  throw ConfigError("unknown test function \"" + name + "\"");
}

std::vector<TestFunction> default_family(const AlphaContext& ctx, double s_extremal) {
  std::vector<TestFunction> out;
  for (const auto& name : family_names()) out.push_back(family_member(ctx, name, s_extremal));
  return out;
}

}  // namespace lbharm
