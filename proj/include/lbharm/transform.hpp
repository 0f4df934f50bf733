#pragma once

// The Laguerre-Bessel transform
//   F_LB(f)(lambda, m) = int_K f(x,t) phi_(lambda,m)(x,t) dm_alpha(x,t)
// and its synthesis adjoint, convolution, and the alpha = 0 translation.

#include <memory>
#include <vector>

#include <Eigen/Core>

#include "lbharm/measure.hpp"
#include "lbharm/report.hpp"

namespace lbharm {

/// Precomputed kernel for one (space grid, spectral grid) pair.
///
/// phi_(lambda,m)(x,t) factors as j(lambda t) Lcal_m(lambda x^2), so the
/// kernel is kept as two matrices with one row per spectral node:
/// bessel(k, j) = j_{alpha-1/2}(lambda_k t_j) and
/// laguerre(k, i) = Lcal_{m_k}(lambda_k x_i^2).
class TransformPlan {
 public:
  TransformPlan(std::shared_ptr<const SpaceGrid> space, std::shared_ptr<const SpectralGrid> spectral);

  const AlphaContext& context() const noexcept { return space_->context(); }
  const std::shared_ptr<const SpaceGrid>& space_grid() const noexcept { return space_; }
  const std::shared_ptr<const SpectralGrid>& spectral_grid() const noexcept { return spectral_; }
  const Eigen::MatrixXd& bessel() const noexcept { return bessel_; }
  const Eigen::MatrixXd& laguerre() const noexcept { return laguerre_; }

  /// phi at spectral node k and space node (i, j).
  double kernel(Eigen::Index k, Eigen::Index i, Eigen::Index j) const {
    return laguerre_(k, i) * bessel_(k, j);
  }

 private:
  std::shared_ptr<const SpaceGrid> space_;
  std::shared_ptr<const SpectralGrid> spectral_;
  Eigen::MatrixXd bessel_;
  Eigen::MatrixXd laguerre_;
};

std::shared_ptr<const TransformPlan> plan(std::shared_ptr<const SpaceGrid> space,
                                          std::shared_ptr<const SpectralGrid> spectral);

SpectralFunction forward(const TransformPlan& plan, const SampledFunction& f);
SampledFunction inverse(const TransformPlan& plan, const SpectralFunction& g);

/// F_LB(f)(lambda, m) at one point, by quadrature on f's grid.
double forward_at(const SampledFunction& f, double lambda, int m);

/// | ||f||_2 - ||F_LB f||_2 | / ||f||_2.
double plancherel_defect(const TransformPlan& plan, const SampledFunction& f);

SampledFunction convolve_spectral(const TransformPlan& plan, const SampledFunction& f,
                                  const SampledFunction& g);

/// Generalized translation T_{(x,t)} f (y,s) for alpha = 0: the average of
/// f(Delta, Y +- t +- s) over theta in [0, pi], with
/// Delta = sqrt(x^2 + y^2 + 2xy cos theta) and Y = xy sin theta. f is
/// extended to negative second arguments by evenness.
double translate_alpha0(const AlphaContext& ctx, const SpacePoint& xt, const SpaceFunction& f,
                        const SpacePoint& ys, int n_theta);

/// (f * g)(x,t) = int T_{(x,t)} f(y,s) g(y,s) dm_0(y,s) at every node of
/// `output`, with the (y,s) integral over `integration` and n_theta nodes in
/// theta.
SampledFunction convolve_direct_alpha0(const SpaceFunction& f, const SpaceFunction& g,
                                       const SpaceGrid& integration,
                                       std::shared_ptr<const SpaceGrid> output, int n_theta);

/// How a convolution is evaluated for Young's inequality.
///
/// direct (alpha = 0 only): translation formula, integrated on `integration`,
/// sampled on `output`. Otherwise spectral: forward on `analysis`, synthesis
/// on `synthesis` (same spectral grid), sampled on the synthesis space grid.
struct ConvolutionSetup {
  bool direct = false;
  std::shared_ptr<const TransformPlan> analysis;
  std::shared_ptr<const TransformPlan> synthesis;
  std::shared_ptr<const SpaceGrid> integration;
  std::shared_ptr<const SpaceGrid> output;
  int n_theta = 32;

  SampledFunction convolve(const SpaceFunction& f, const SpaceFunction& g) const;
  /// Grid on which the convolution is sampled.
  std::shared_ptr<const SpaceGrid> result_grid() const;
  std::shared_ptr<const SpaceGrid> input_grid() const;
};

struct YoungExponents {
  double p, q, r;
};

/// ||f*g||_r <= ||f||_p ||g||_q with 1/p + 1/q = 1 + 1/r. The grid error
/// estimate is the change of the ratio between `setup` and `reference`, an
/// independent evaluation (a finer grid, or the other convolution method).
InequalityReport young_check(const ConvolutionSetup& setup, const ConvolutionSetup& reference,
                             const SpaceFunction& f, const SpaceFunction& g, double p,
                             double q, double r);
/// One report per exponent triple; each convolution is computed once.
std::vector<InequalityReport> young_checks(const ConvolutionSetup& setup,
                                           const ConvolutionSetup& reference,
                                           const SpaceFunction& f, const SpaceFunction& g,
                                           const std::vector<YoungExponents>& exponents);

}  // namespace lbharm
