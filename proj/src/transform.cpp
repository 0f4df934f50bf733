#include "lbharm/transform.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

namespace lbharm {

TransformPlan::TransformPlan(std::shared_ptr<const SpaceGrid> space,
                             std::shared_ptr<const SpectralGrid> spectral)
    : space_(std::move(space)), spectral_(std::move(spectral)) {
  if (!space_ || !spectral_) throw ConfigError("plan: missing grid");
  if (!(space_->context() == spectral_->context())) {
    throw ConfigError("plan: space and spectral grids use different alpha");
  }
  const double alpha = context().alpha();
  const double nu = context().bessel_order();
  const Eigen::VectorXd& x = space_->x_nodes();
  const Eigen::VectorXd& t = space_->t_nodes();
  const Eigen::VectorXd& lambda = spectral_->lambda();
  const Eigen::VectorXi& m = spectral_->m_index();
  const Eigen::Index n = spectral_->size();

  bessel_.resize(n, t.size());
  laguerre_.resize(n, x.size());
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index j = 0; j < t.size(); ++j) bessel_(k, j) = bessel_normalized(nu, lambda[k] * t[j]);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      laguerre_(k, i) = laguerre_function(m[k], alpha, lambda[k] * x[i] * x[i]);
    }
  }
}

std::shared_ptr<const TransformPlan> plan(std::shared_ptr<const SpaceGrid> space,
                                          std::shared_ptr<const SpectralGrid> spectral) {
  return std::make_shared<const TransformPlan>(std::move(space), std::move(spectral));
}

SpectralFunction forward(const TransformPlan& plan, const SampledFunction& f) {
  if (f.grid != plan.space_grid() &&
      !(f.grid && f.grid->spec() == plan.space_grid()->spec() &&
        f.grid->context() == plan.context())) {
    throw ShapeError("forward: function is not sampled on the plan's space grid");
  }
  if (f.values.rows() != plan.space_grid()->nx() || f.values.cols() != plan.space_grid()->nt()) {
    throw ShapeError("forward: sample shape does not match the plan");
  }
  const Eigen::MatrixXd weighted = f.values.cwiseProduct(plan.space_grid()->weights());
  // partial(i, k) = sum_j weighted(i, j) bessel(k, j)
  const Eigen::MatrixXd partial = weighted * plan.bessel().transpose();
  Eigen::VectorXd out =
      (plan.laguerre().array() * partial.transpose().array()).rowwise().sum().matrix();
  return SpectralFunction(plan.spectral_grid(), std::move(out));
}

SampledFunction inverse(const TransformPlan& plan, const SpectralFunction& g) {
  if (g.grid != plan.spectral_grid()) {
    throw ShapeError("inverse: function is not sampled on the plan's spectral grid");
  }
  const Eigen::VectorXd wg = g.values.cwiseProduct(plan.spectral_grid()->weights());
  const Eigen::MatrixXd scaled = wg.asDiagonal() * plan.bessel();
  Eigen::MatrixXd values = plan.laguerre().transpose() * scaled;
  return SampledFunction(plan.space_grid(), std::move(values));
}

double forward_at(const SampledFunction& f, double lambda, int m) {
  if (!f.grid) throw ShapeError("forward_at: function has no grid");
  if (!(lambda >= 0.0) || m < 0) throw DomainError("forward_at: requires lambda >= 0 and m >= 0");
  const SpaceGrid& grid = *f.grid;
  const double alpha = grid.context().alpha();
  const double nu = grid.context().bessel_order();
  Eigen::VectorXd lag(grid.nx());
  Eigen::VectorXd bes(grid.nt());
  for (Eigen::Index i = 0; i < grid.nx(); ++i) {
    lag[i] = laguerre_function(m, alpha, lambda * grid.x_nodes()[i] * grid.x_nodes()[i]);
  }
  for (Eigen::Index j = 0; j < grid.nt(); ++j) bes[j] = bessel_normalized(nu, lambda * grid.t_nodes()[j]);
  return lag.dot(f.values.cwiseProduct(grid.weights()) * bes);
}

double plancherel_defect(const TransformPlan& plan, const SampledFunction& f) {
  const double n_space = lp_norm_space(f, 2.0);
  if (n_space == 0.0) throw UndefinedRatioError("plancherel_defect: f is zero");
  const double n_spec = lp_norm_spectral(forward(plan, f), 2.0);
  return std::fabs(n_space - n_spec) / n_space;
}

SampledFunction convolve_spectral(const TransformPlan& plan, const SampledFunction& f,
                                  const SampledFunction& g) {
  const SpectralFunction ff = forward(plan, f);
  const SpectralFunction fg = forward(plan, g);
  return inverse(plan, SpectralFunction(ff.grid, ff.values.cwiseProduct(fg.values)));
}

namespace {

double translate_with_rule(const QuadratureRule& rule, const SpacePoint& xt, const SpaceFunction& f,
                           const SpacePoint& ys) {
  const double x = xt.x, t = xt.t, y = ys.x, s = ys.t;
  double sum = 0.0;
  for (Eigen::Index k = 0; k < rule.size(); ++k) {
    const double c = std::cos(rule.nodes[k]);
    const double delta = std::sqrt(std::max(0.0, x * x + y * y + 2.0 * x * y * c));
    const double big_y = x * y * std::sin(rule.nodes[k]);
    const double v = f(delta, std::fabs(big_y + t + s)) + f(delta, std::fabs(big_y + t - s)) +
                     f(delta, std::fabs(big_y - t + s)) + f(delta, std::fabs(big_y - t - s));
    sum += rule.weights[k] * v;
  }
  return sum / (4.0 * std::numbers::pi);
}

QuadratureRule theta_rule(int n_theta) {
  if (n_theta < 1) throw ConfigError("translation: n_theta must be >= 1");
  return composite_gauss_legendre(0.0, std::numbers::pi, 1, n_theta);
}

}  // namespace

double translate_alpha0(const AlphaContext& ctx, const SpacePoint& xt, const SpaceFunction& f,
                        const SpacePoint& ys, int n_theta) {
  if (ctx.alpha() != 0.0) throw UnsupportedError("translate_alpha0: requires alpha = 0");
  return translate_with_rule(theta_rule(n_theta), xt, f, ys);
}

SampledFunction convolve_direct_alpha0(const SpaceFunction& f, const SpaceFunction& g,
                                       const SpaceGrid& integration,
                                       std::shared_ptr<const SpaceGrid> output, int n_theta) {
  if (integration.context().alpha() != 0.0 || output->context().alpha() != 0.0) {
    throw UnsupportedError("convolve_direct_alpha0: requires alpha = 0");
  }
  const Eigen::MatrixXd gw = integration.sample(g).cwiseProduct(integration.weights());
  const Eigen::VectorXd& ys = integration.x_nodes();
  const Eigen::VectorXd& ss = integration.t_nodes();
  const QuadratureRule rule = theta_rule(n_theta);
  Eigen::MatrixXd values(output->nx(), output->nt());
  for (Eigen::Index i = 0; i < output->nx(); ++i) {
    for (Eigen::Index j = 0; j < output->nt(); ++j) {
      const SpacePoint xt{output->x_nodes()[i], output->t_nodes()[j]};
      double sum = 0.0;
      for (Eigen::Index a = 0; a < ys.size(); ++a) {
        for (Eigen::Index b = 0; b < ss.size(); ++b) {
          const double w = gw(a, b);
          if (w == 0.0) continue;
          sum += w * translate_with_rule(rule, xt, f, {ys[a], ss[b]});
        }
      }
      values(i, j) = sum;
    }
  }
  return SampledFunction(std::move(output), std::move(values));
}

SampledFunction ConvolutionSetup::convolve(const SpaceFunction& f, const SpaceFunction& g) const {
  if (direct) return convolve_direct_alpha0(f, g, *integration, output, n_theta);
  const auto& space = analysis->space_grid();
  const SpectralFunction ff = forward(*analysis, SampledFunction::sample(space, f));
  const SpectralFunction fg = forward(*analysis, SampledFunction::sample(space, g));
  const auto& syn = synthesis ? *synthesis : *analysis;
  if (syn.spectral_grid() != analysis->spectral_grid()) {
    throw ConfigError("convolution: analysis and synthesis plans must share a spectral grid");
  }
  return inverse(syn, SpectralFunction(ff.grid, ff.values.cwiseProduct(fg.values)));
}

std::shared_ptr<const SpaceGrid> ConvolutionSetup::result_grid() const {
  if (direct) return output;
  return synthesis ? synthesis->space_grid() : analysis->space_grid();
}

std::shared_ptr<const SpaceGrid> ConvolutionSetup::input_grid() const {
  return direct ? integration : analysis->space_grid();
}

namespace {

struct YoungNorms {
  SampledFunction conv;
  SampledFunction f;
  SampledFunction g;
};

YoungNorms young_norms(const ConvolutionSetup& setup, const SpaceFunction& f, const SpaceFunction& g) {
  const auto in = setup.input_grid();
  return {setup.convolve(f, g), SampledFunction::sample(in, f), SampledFunction::sample(in, g)};
}

void check_exponents(const YoungExponents& e) {
  if (!(e.p >= 1.0) || !(e.q >= 1.0) || !(e.r >= 1.0)) {
    throw DomainError("young_check: exponents must be >= 1");
  }
  if (std::fabs(1.0 / e.p + 1.0 / e.q - 1.0 - 1.0 / e.r) > 1e-12) {
    throw DomainError("young_check: exponents must satisfy 1/p + 1/q = 1 + 1/r");
  }
}

}  // namespace

std::vector<InequalityReport> young_checks(const ConvolutionSetup& setup,
                                           const ConvolutionSetup& reference,
                                           const SpaceFunction& f, const SpaceFunction& g,
                                           const std::vector<YoungExponents>& exponents) {
  for (const auto& e : exponents) check_exponents(e);
  const auto start = std::chrono::steady_clock::now();
  const YoungNorms base = young_norms(setup, f, g);
  const YoungNorms ref = young_norms(reference, f, g);
  const double setup_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  std::vector<InequalityReport> out;
  for (const auto& e : exponents) {
    InequalityReport rep;
    rep.name = "young";
    rep.kind = InequalityReport::Kind::upper;
    rep.lhs = lp_norm_space(base.conv, e.r);
    rep.rhs_paper = lp_norm_space(base.f, e.p) * lp_norm_space(base.g, e.q);
    const double rhs_ref = lp_norm_space(ref.f, e.p) * lp_norm_space(ref.g, e.q);
    const double ratio_ref = rhs_ref == 0.0 ? 0.0 : lp_norm_space(ref.conv, e.r) / rhs_ref;
    const double ratio = rep.rhs_paper == 0.0 ? 0.0 : rep.lhs / rep.rhs_paper;
    rep.grid_error_estimate = std::fabs(ratio_ref - ratio);
    rep.params = {{"alpha", setup.input_grid()->context().alpha()}, {"p", e.p}, {"q", e.q}, {"r", e.r}};
    rep.labels = {{"method", setup.direct ? "direct" : "spectral"},
                  {"reference_method", reference.direct ? "direct" : "spectral"}};
    rep.values = {{"ratio_reference", ratio_ref}};
    rep.grid = {{"result", setup.result_grid()->id()}, {"input", setup.input_grid()->id()}};
    rep.finalize();
    rep.runtime_ms = setup_ms / static_cast<double>(exponents.size());
    out.push_back(std::move(rep));
  }
  return out;
}

InequalityReport young_check(const ConvolutionSetup& setup, const ConvolutionSetup& reference,
                             const SpaceFunction& f, const SpaceFunction& g, double p,
                             double q, double r) {
  return young_checks(setup, reference, f, g, {{p, q, r}}).front();
}

}  // namespace lbharm
