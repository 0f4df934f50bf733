#include "lbharm/heat.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lbharm {

namespace {

void check_s(double s, const char* where) {
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError(std::string(where) + ": s must be positive");
}

Eigen::VectorXd eigenvalues(const SpectralGrid& grid) {
  const double a = grid.context().alpha();
  return (2.0 * grid.lambda().array() * (2.0 * grid.m_index().cast<double>().array() + a + 1.0))
      .matrix();
}

}  // namespace

HeatParams::HeatParams(double s_, const AlphaContext& c) : s(s_), ctx(c) { check_s(s, "HeatParams"); }

double eigenvalue_L(const AlphaContext& ctx, double lambda, int m) {
  if (lambda < 0.0 || m < 0) throw DomainError("eigenvalue_L: lambda and m must be nonnegative");
  return 2.0 * lambda * (2.0 * m + ctx.alpha() + 1.0);
}

double heat_multiplier(const AlphaContext& ctx, double s, double lambda, int m) {
  check_s(s, "heat_multiplier");
  return std::exp(-eigenvalue_L(ctx, lambda, m) * s);
}

SpectralFunction heat_multiplier(std::shared_ptr<const SpectralGrid> grid, double s) {
  check_s(s, "heat_multiplier");
  Eigen::VectorXd v = (-s * eigenvalues(*grid).array()).exp().matrix();
  return SpectralFunction(std::move(grid), std::move(v));
}

SampledFunction heat_kernel(const TransformPlan& plan, double s) {
  return inverse(plan, heat_multiplier(plan.spectral_grid(), s));
}

SpectralFunction heat_apply_spectral(double s, const SpectralFunction& g) {
  const SpectralFunction mult = heat_multiplier(g.grid, s);
  return SpectralFunction(g.grid, g.values.cwiseProduct(mult.values));
}

SampledFunction heat_apply(const TransformPlan& plan, double s, const SampledFunction& f) {
  check_s(s, "heat_apply");
  return inverse(plan, heat_apply_spectral(s, forward(plan, f)));
}

double heat_l2_norm_sq(const AlphaContext& ctx, double s, int quad_points, GammaNorm norm) {
  check_s(s, "heat_l2_norm_sq");
  if (quad_points < 1) throw ConfigError("heat_l2_norm_sq: quad_points must be >= 1");
  const double a = ctx.alpha();
  auto integrand = [&](double lambda) {
    const double u = lambda * s;
    // (2 sinh 4u)^{-a-1} without overflow: e^{-4u(a+1)} (1 - e^{-8u})^{-a-1}.
    const double damp = -std::expm1(-8.0 * u);
    return std::exp(-4.0 * u * (a + 1.0)) * std::pow(damp, -a - 1.0) *
           std::pow(lambda, 3.0 * a + 1.0);
  };
  // Near 0 the integrand behaves like lambda^{2a}; tanh-sinh absorbs the
  // non-smooth endpoint. Beyond 1/s it decays like exp(-4(a+1) s lambda).
  const double split = 1.0 / s;
  const double head = tanh_sinh(integrand, 0.0, split, 1e-15);
  // Stop where the remaining tail is below 1e-17 relative to the head.
  double end = split;
  while (integrand(end) * end > 1e-18 * head) end += split;
  const int panels = static_cast<int>(std::lround((end - split) / split));
  double body = 0.0;
  if (panels > 0) body = composite_gauss_legendre(split, end, panels, quad_points).apply(integrand);
  return gamma_prefactor(ctx, norm) * (head + body);
}

SpectralFunction apply_L_power_spectral(double b, const SpectralFunction& g) {
  if (!(b > 0.0)) throw DomainError("apply_L_power: b must be positive");
  const Eigen::VectorXd mult = eigenvalues(*g.grid).array().pow(b).matrix();
  return SpectralFunction(g.grid, g.values.cwiseProduct(mult));
}

SampledFunction apply_L_power(const TransformPlan& plan, double b, const SampledFunction& f) {
  return inverse(plan, apply_L_power_spectral(b, forward(plan, f)));
}

double heat_smoothing_ratio(const TransformPlan& plan, const SpaceFunction& f, double a, double s) {
  const double d = plan.context().half_dimension();
  if (!(a > 0.0) || !(a < d)) throw DomainError("heat_smoothing_ratio: requires 0 < a < 3 alpha + 2");
  check_s(s, "heat_smoothing_ratio");
  const auto& grid = plan.space_grid();
  const SampledFunction fs = SampledFunction::sample(grid, f);
  const double heat_norm = lp_norm_spectral(heat_apply_spectral(s, forward(plan, fs)), 2.0);
  const SampledFunction weighted = SampledFunction::sample(
      grid, [&](double x, double t) { return std::pow(homogeneous_norm(x, t), a) * f(x, t); });
  const double moment = lp_norm_space(weighted, 2.0);
  if (moment == 0.0) throw UndefinedRatioError("heat_smoothing_ratio: f is zero");
  return heat_norm / (std::pow(s, -a / 2.0) * moment);
}

double heat_equation_residual(const TransformPlan& plan, double s, double ds, double interior_min) {
  check_s(s, "heat_equation_residual");
  if (!(ds > 0.0) || !(ds < s)) throw DomainError("heat_equation_residual: need 0 < ds < s");
  const auto& spectral = plan.spectral_grid();
  const SampledFunction h = heat_kernel(plan, s);
  const SampledFunction hp = heat_kernel(plan, s + ds);
  const SampledFunction hm = heat_kernel(plan, s - ds);
  const SpectralFunction lh = apply_L_power_spectral(1.0, heat_multiplier(spectral, s));
  const SampledFunction l_h = inverse(plan, lh);
  const auto& x = plan.space_grid()->x_nodes();
  const auto& t = plan.space_grid()->t_nodes();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] < interior_min) continue;
    for (Eigen::Index j = 0; j < t.size(); ++j) {
      if (t[j] < interior_min) continue;
      const double dsh = (hp.values(i, j) - hm.values(i, j)) / (2.0 * ds);
      worst = std::max(worst, std::fabs(l_h.values(i, j) + dsh));
    }
  }
  return worst / h.values.cwiseAbs().maxCoeff();
}

std::optional<std::string> heat_small_s_warning(const SpectralGrid& grid, double s) {
  double lambda_max = 0.0;
  int m_max = 0;
  for (const auto& row : grid.rows()) {
    lambda_max = std::max(lambda_max, row.lambda_hi);
    if (row.m_first == row.m_last) m_max = std::max(m_max, row.m);
  }
  const double reach = s * lambda_max * (2.0 * m_max + grid.context().alpha() + 1.0);
  if (reach >= 20.0) return std::nullopt;
  std::ostringstream msg;
  msg << "heat: s * lambda_max * (2 m_max + alpha + 1) = " << reach
      << " < 20; the multiplier is not resolved by the spectral grid";
  return msg.str();
}

}  // namespace lbharm
