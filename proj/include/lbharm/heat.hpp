#pragma once

// Heat semigroup of L, defined through its spectral multiplier
// exp(-2 lambda (2m + alpha + 1) s).

#include <optional>
#include <string>

#include "lbharm/transform.hpp"

namespace lbharm {

struct HeatParams {
  double s;
  AlphaContext ctx;

  HeatParams(double s_, const AlphaContext& c);
};

/// 2 lambda (2m + alpha + 1).
double eigenvalue_L(const AlphaContext& ctx, double lambda, int m);

double heat_multiplier(const AlphaContext& ctx, double s, double lambda, int m);

/// Multiplier sampled on every node of a spectral grid.
SpectralFunction heat_multiplier(std::shared_ptr<const SpectralGrid> grid, double s);

/// h_s on the plan's space grid, synthesized from the multiplier.
SampledFunction heat_kernel(const TransformPlan& plan, double s);

SampledFunction heat_apply(const TransformPlan& plan, double s, const SampledFunction& f);
SpectralFunction heat_apply_spectral(double s, const SpectralFunction& g);

/// ||F_LB(h_s)||^2 in L^2(gamma_alpha) from the generating-function identity
///   s^{-(3 alpha + 2)} c_gamma int_0^inf (2 sinh 4u)^{-alpha-1} u^{3 alpha + 1} du,
/// integrated in lambda = u/s. quad_points is the Gauss-Legendre count per
/// unit panel beyond lambda = 1/s.
double heat_l2_norm_sq(const AlphaContext& ctx, double s, int quad_points = 16,
                       GammaNorm norm = GammaNorm::paper);

/// L^b f, with the multiplier (2 lambda (2m + alpha + 1))^b.
SampledFunction apply_L_power(const TransformPlan& plan, double b, const SampledFunction& f);
SpectralFunction apply_L_power_spectral(double b, const SpectralFunction& g);

/// ||H^s f||_2 / (s^{-a/2} || |(x,t)|^a f ||_2), 0 < a < 3 alpha + 2. The
/// numerator is evaluated on the spectral side.
double heat_smoothing_ratio(const TransformPlan& plan, const SpaceFunction& f, double a, double s);

/// max |(L + d/ds) h| / max |h| over space nodes with x, t >= interior_min;
/// d/ds by a central difference with step ds, L through its multiplier.
double heat_equation_residual(const TransformPlan& plan, double s, double ds = 1e-3,
                              double interior_min = 0.5);

/// Message when s lambda_max (2 m_max + alpha + 1) < 20, i.e. the multiplier
/// has not decayed at the edge of the spectral grid.
std::optional<std::string> heat_small_s_warning(const SpectralGrid& grid, double s);

}  // namespace lbharm
