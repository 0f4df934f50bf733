#pragma once

// Uncertainty inequalities: closed-form constants in their paper and oracle
// variants, and numerical evaluation of both sides of each inequality.
//
// "paper" constants use the Beta block exactly as displayed. "oracle"
// constants replace it by the block recovered from the quadrature ball
// moment (int_{B_1} dm_alpha times 3 alpha + 2), which comes out at half the
// displayed value.

#include <memory>
#include <utility>
#include <vector>

#include "lbharm/heat.hpp"
#include "lbharm/measure.hpp"
#include "lbharm/report.hpp"
#include "lbharm/transform.hpp"

namespace lbharm {

enum class ConstantVariant { paper, oracle };

/// B((a+1)/2, (2a+1)/2) / (4^{a+1} pi Gamma(a+1)) for paper; the quadrature
/// value of (3 alpha + 2) m_alpha(B_1) for oracle.
double beta_block(const AlphaContext& ctx, ConstantVariant variant);

/// K_{alpha,s}, 0 < s < 3 alpha + 2.
double constant_K(const AlphaContext& ctx, double s, ConstantVariant variant = ConstantVariant::paper);

struct ConstantN {
  double paper = 0.0;
  double oracle = 0.0;  // int_K (1 + |(x,t)|^{2s})^{-1} dm_alpha by quadrature
};

/// N_{alpha,s}, s > 3 alpha + 2.
ConstantN constant_N(const AlphaContext& ctx, double s);

/// M_{alpha,s} from M^2 = N s/(s-d) ((s-d)/d)^{d/s}, d = 3 alpha + 2.
double constant_M(const AlphaContext& ctx, double s, bool use_oracle);
/// The paper's displayed formula for M_{alpha,s}, evaluated directly.
double constant_M_displayed(const AlphaContext& ctx, double s);

/// C_alpha as displayed: d^2 (d-1)^{-1/(2d)-1} block^{1/(2d)}.
double constant_C_critical(const AlphaContext& ctx);
/// K_{alpha,1} d (d-1)^{1/d-1}: the constant obtained by composing the s = 1
/// local inequality with the interpolation inequality at exponent d.
double constant_C_composed(const AlphaContext& ctx, ConstantVariant variant);

/// g(r) = r^{-s} + (block gamma(E) / (d - s))^{1/2} r^{d-s}.
double bound_profile(const AlphaContext& ctx, double s, double gamma_e, double r,
                     ConstantVariant variant = ConstantVariant::paper);
/// Closed-form minimizer r_0 of bound_profile.
double bound_profile_argmin(const AlphaContext& ctx, double s, double gamma_e,
                            ConstantVariant variant = ConstantVariant::paper);

/// || |(x,t)|^s f ||_2 with the weight applied to the closed form of f.
double moment_norm(std::shared_ptr<const SpaceGrid> grid, const SpaceFunction& f, double s);

/// Grids used to evaluate one inequality. `refined` (optional) is a finer
/// version of `space`; the change of the deciding ratio between the two is
/// the report's grid error estimate.
struct VerifyGrids {
  std::shared_ptr<const SpaceGrid> space;
  std::shared_ptr<const SpaceGrid> refined;
  GammaNorm norm = GammaNorm::plancherel;
  int set_panels = 4;
  int set_nodes = 16;
};

/// lhs = || |(x,t)|^a f ||_2^{2b/(a+2b)} || L^b f ||_2^{a/(a+2b)}, rhs = ||f||_2.
/// The ratio is invariant under f -> f_r, so only a positive lower bound is
/// asserted.
InequalityReport heisenberg_ratio(const TransformPlan& plan, const TransformPlan* refined,
                                  const SpaceFunction& f, double a, double b);
/// One report per (a, b), sharing the transforms of f.
std::vector<InequalityReport> heisenberg_sweep(const TransformPlan& plan, const TransformPlan* refined,
                                               const SpaceFunction& f,
                                               const std::vector<std::pair<double, double>>& ab);

InequalityReport interpolation_check(const VerifyGrids& grids, const SpaceFunction& f, double s);

/// ||F_LB(f) chi_E||_2 < K gamma(E)^{s/(2d)} || |(x,t)|^s f ||_2, with
/// 0 < s < d = 3 alpha + 2.
InequalityReport local_small_s(const VerifyGrids& grids, const SpaceFunction& f,
                               const SpectralSet& set, double s);

/// ||f||_1 <= M ||f||_2^{1-d/s} || |(x,t)|^s f ||_2^{d/s}, s > d, with the
/// Cauchy-Schwarz step ||f||_1^2 <= N (||f||_2^2 + || |(x,t)|^s f ||_2^2)
/// recorded in `values`.
InequalityReport lemma512_ratio(const VerifyGrids& grids, const SpaceFunction& f, double s);

/// ||F_LB(f) chi_E||_2 < M gamma(E)^{1/2} ||f||_2^{1-d/s} || |(x,t)|^s f ||_2^{d/s},
/// s > d.
InequalityReport local_large_s(const VerifyGrids& grids, const SpaceFunction& f,
                               const SpectralSet& set, double s);

/// The critical case s = d:
/// ||F_LB(f) chi_E||_2 < C gamma(E)^{1/(2d)} ||f||_2^{(d-1)/d} || |(x,t)|^d f ||_2^{1/d}.
InequalityReport local_critical(const VerifyGrids& grids, const SpaceFunction& f,
                                const SpectralSet& set);

}  // namespace lbharm
