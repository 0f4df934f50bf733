#include "lbharm/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace lbharm {

namespace {

constexpr double kPi = std::numbers::pi;

QuadratureRule axis_rule(double extent, int panels, int nodes, const SpaceGridSpec& spec) {
  if (spec.graded) {
    const auto edges = geometric_edges(spec.graded_first_width, spec.graded_ratio, extent);
    return panel_gauss_legendre(edges, nodes);
  }
  return composite_gauss_legendre(0.0, extent, panels, nodes);
}

void append_row(std::vector<SpectralRow>& rows, std::vector<double>& lambda,
                std::vector<double>& weights, SpectralRow row, const QuadratureRule& rule,
                double alpha, double row_weight) {
  row.offset = static_cast<Eigen::Index>(lambda.size());
  row.count = rule.size();
  for (Eigen::Index j = 0; j < rule.size(); ++j) {
    const double l = rule.nodes[j];
    lambda.push_back(l);
    weights.push_back(row_weight * std::pow(l, 3.0 * alpha + 1.0) * rule.weights[j]);
  }
  rows.push_back(row);
}

double log_laguerre_at_zero(double m, double alpha) {
  return std::lgamma(m + alpha + 1.0) - std::lgamma(m + 1.0) - std::lgamma(alpha + 1.0);
}

// L_m(0) / (2m + alpha + 1)^{3 alpha + 2} for real m.
double tail_term(double m, double alpha) {
  return std::exp(log_laguerre_at_zero(m, alpha) -
                  (3.0 * alpha + 2.0) * std::log(2.0 * m + alpha + 1.0));
}

}  // namespace

double homogeneous_norm(double x, double t) {
  return std::sqrt(std::sqrt(x * x * x * x + 4.0 * t * t));
}

double homogeneous_norm(const SpacePoint& p) { return homogeneous_norm(p.x, p.t); }

SpacePoint dilate(double r, const SpacePoint& p) {
  if (!(r > 0.0)) throw DomainError("dilate: r must be positive");
  return {r * p.x, r * r * p.t};
}

SpaceFunction dilate_normalized(const AlphaContext& ctx, double r, SpaceFunction f) {
  if (!(r > 0.0)) throw DomainError("dilate_normalized: r must be positive");
  const double scale = std::pow(r, -(6.0 * ctx.alpha() + 4.0));
  return [scale, r, f = std::move(f)](double x, double t) {
    return scale * f(x / r, t / (r * r));
  };
}

double m_alpha_density(const AlphaContext& ctx, double x, double t) {
  const double a = ctx.alpha();
  return std::pow(x, 2.0 * a + 1.0) * std::pow(t, 2.0 * a) / (kPi * ctx.gamma_alpha_plus_1());
}

// ---------------------------------------------------------------------------

SpaceGrid::SpaceGrid(const AlphaContext& ctx, const SpaceGridSpec& spec)
    : ctx_(ctx), spec_(spec) {
  if (!(spec.x_max > 0.0) || !(spec.t_max > 0.0)) {
    throw ConfigError("space grid: x_max and t_max must be positive");
  }
  if (spec.panels_x < 1 || spec.panels_t < 1 || spec.nodes_per_panel < 1) {
    throw ConfigError("space grid: panel and node counts must be >= 1");
  }
  x_ = axis_rule(spec.x_max, spec.panels_x, spec.nodes_per_panel, spec);
  t_ = axis_rule(spec.t_max, spec.panels_t, spec.nodes_per_panel, spec);
  weights_.resize(x_.size(), t_.size());
  for (Eigen::Index i = 0; i < x_.size(); ++i) {
    for (Eigen::Index j = 0; j < t_.size(); ++j) {
      weights_(i, j) =
          x_.weights[i] * t_.weights[j] * m_alpha_density(ctx_, x_.nodes[i], t_.nodes[j]);
    }
  }
}

double SpaceGrid::inscribed_radius() const {
  return std::min(spec_.x_max, std::sqrt(2.0 * spec_.t_max));
}

std::string SpaceGrid::id() const {
  std::ostringstream id;
  id << "space:X" << spec_.x_max << ":T" << spec_.t_max << ":";
  if (spec_.graded) {
    id << "graded" << spec_.graded_first_width << "x" << spec_.graded_ratio;
  } else {
    id << spec_.panels_x << "x" << spec_.panels_t;
  }
  id << ":n" << spec_.nodes_per_panel;
  return id.str();
}

Eigen::MatrixXd SpaceGrid::sample(const SpaceFunction& f) const {
  Eigen::MatrixXd v(nx(), nt());
  for (Eigen::Index i = 0; i < nx(); ++i) {
    for (Eigen::Index j = 0; j < nt(); ++j) v(i, j) = f(x_.nodes[i], t_.nodes[j]);
  }
  return v;
}

std::shared_ptr<const SpaceGrid> build_space_grid(const AlphaContext& ctx, const SpaceGridSpec& spec) {
  return std::make_shared<const SpaceGrid>(ctx, spec);
}

std::shared_ptr<const SpaceGrid> build_space_grid(const AlphaContext& ctx, double x_max,
                                                  double t_max, int panels_x, int panels_t,
                                                  int nodes_per_panel) {
  SpaceGridSpec spec;
  spec.x_max = x_max;
  spec.t_max = t_max;
  spec.panels_x = panels_x;
  spec.panels_t = panels_t;
  spec.nodes_per_panel = nodes_per_panel;
  return build_space_grid(ctx, spec);
}

SampledFunction::SampledFunction(std::shared_ptr<const SpaceGrid> g, Eigen::MatrixXd v)
    : grid(std::move(g)), values(std::move(v)) {
  if (!grid) throw ShapeError("SampledFunction: missing grid");
  if (values.rows() != grid->nx() || values.cols() != grid->nt()) {
    throw ShapeError("SampledFunction: values do not match grid shape");
  }
}

SampledFunction SampledFunction::sample(std::shared_ptr<const SpaceGrid> g, const SpaceFunction& f) {
  Eigen::MatrixXd v = g->sample(f);
  return SampledFunction(std::move(g), std::move(v));
}

namespace {

void check_space(const SampledFunction& f) {
  if (!f.grid || f.values.rows() != f.grid->nx() || f.values.cols() != f.grid->nt()) {
    throw ShapeError("sampled function does not match its grid");
  }
}

void check_spectral(const SpectralFunction& g) {
  if (!g.grid || g.values.size() != g.grid->size()) {
    throw ShapeError("spectral function does not match its grid");
  }
}

}  // namespace

double integrate_space(const SampledFunction& f) {
  check_space(f);
  return (f.values.array() * f.grid->weights().array()).sum();
}

double lp_norm_space(const SampledFunction& f, double p) {
  check_space(f);
  if (!(p >= 1.0)) throw DomainError("lp_norm_space: p must be >= 1");
  if (std::isinf(p)) return f.values.cwiseAbs().maxCoeff();
  if (p == 2.0) return std::sqrt((f.values.array().square() * f.grid->weights().array()).sum());
  return std::pow((f.values.array().abs().pow(p) * f.grid->weights().array()).sum(), 1.0 / p);
}

double inner_product_space(const SampledFunction& f, const SampledFunction& g) {
  check_space(f);
  check_space(g);
  if (f.grid != g.grid) throw ShapeError("inner_product_space: functions live on different grids");
  return (f.values.array() * g.values.array() * f.grid->weights().array()).sum();
}

// ---------------------------------------------------------------------------

double gamma_prefactor(const AlphaContext& ctx, GammaNorm norm) {
  const double a = ctx.alpha();
  const double g = ctx.gamma_alpha_plus_half();
  switch (norm) {
    case GammaNorm::paper: return 1.0 / (std::pow(2.0, 2.0 * a - 1.0) * g);
    case GammaNorm::plancherel: return 4.0 * kPi / (std::pow(4.0, a) * g * g);
  }
  return 0.0;
}

std::string to_string(GammaNorm norm) {
  return norm == GammaNorm::paper ? "paper" : "plancherel";
}

GammaNorm parse_gamma_norm(const std::string& name) {
  if (name == "paper") return GammaNorm::paper;
  if (name == "plancherel") return GammaNorm::plancherel;
  throw ConfigError("gamma_norm must be \"plancherel\" or \"paper\", got \"" + name + "\"");
}

SpectralGrid::SpectralGrid(const AlphaContext& ctx, std::vector<SpectralRow> rows,
                           const Eigen::VectorXd& lambda, const Eigen::VectorXd& weights,
                           GammaNorm norm, std::string id)
    : ctx_(ctx), rows_(std::move(rows)), lambda_(lambda), weights_(weights), norm_(norm),
      id_(std::move(id)) {
  if (lambda_.size() != weights_.size()) throw ShapeError("spectral grid: size mismatch");
  m_.resize(lambda_.size());
  for (const auto& row : rows_) m_.segment(row.offset, row.count).setConstant(row.m);
}

Eigen::VectorXd SpectralGrid::sample(const std::function<double(double, int)>& g) const {
  Eigen::VectorXd v(size());
  for (Eigen::Index k = 0; k < size(); ++k) v[k] = g(lambda_[k], m_[k]);
  return v;
}

double laguerre_tail_sum(double alpha, int m_first) {
  if (m_first < 0) throw DomainError("laguerre_tail_sum: m_first must be nonnegative");
  const int n_explicit = std::max(m_first, 20000);
  double sum = 0.0;
  for (int m = n_explicit - 1; m >= m_first; --m) sum += tail_term(m, alpha);
  // Euler-Maclaurin remainder from N on, with the integral mapped to (0, 1].
  const double n = n_explicit;
  const double integral = tanh_sinh(
      [&](double u) { return tail_term(n / u, alpha) * n / (u * u); }, 0.0, 1.0, 1e-14);
  const double f_n = tail_term(n, alpha);
  const double log_slope = alpha / (n + 0.5 * (alpha + 1.0)) -
                           2.0 * (3.0 * alpha + 2.0) / (2.0 * n + alpha + 1.0);
  return sum + integral + 0.5 * f_n - f_n * log_slope / 12.0;
}

std::shared_ptr<const SpectralGrid> build_spectral_grid(const AlphaContext& ctx,
                                                        const SpectralGridSpec& spec) {
  if (!(spec.lambda_max > 0.0) || !(spec.mu_max > 0.0)) {
    throw ConfigError("spectral grid: lambda_max and mu_max must be positive");
  }
  if (spec.m_max < 0 || spec.panels < 1 || spec.nodes_per_panel < 1) {
    throw ConfigError("spectral grid: m_max >= 0, panels >= 1, nodes_per_panel >= 1 required");
  }
  if (spec.m_tail && (!(spec.tail_ratio > 1.0) || !(spec.tail_extent >= 1.0))) {
    throw ConfigError("spectral grid: tail_ratio must exceed 1 and tail_extent be >= 1");
  }
  const double a = ctx.alpha();
  const double d = 3.0 * a + 2.0;
  const double pref = gamma_prefactor(ctx, spec.norm);
  auto lambda_hi = [&](int m) {
    return std::min(spec.lambda_max, spec.mu_max / (2.0 * m + a + 1.0));
  };

  std::vector<SpectralRow> rows;
  std::vector<double> lambda, weights;
  for (int m = 0; m <= spec.m_max; ++m) {
    SpectralRow row{m, m, m, 0.0, lambda_hi(m)};
    const auto rule = composite_gauss_legendre(0.0, row.lambda_hi, spec.panels, spec.nodes_per_panel);
    append_row(rows, lambda, weights, row, rule, a, pref * laguerre_at_zero(m, a));
  }

  if (spec.m_tail) {
    // Block weight S = sum L_m(0)/(2m+a+1)^d; the row at representative
    // index m_rep carries S (2 m_rep + a + 1)^d in place of L_m(0).
    auto add_block = [&](int m_rep, int first, int last, double block_sum) {
      SpectralRow row{m_rep, first, last, 0.0, lambda_hi(m_rep)};
      const auto rule =
          composite_gauss_legendre(0.0, row.lambda_hi, spec.panels, spec.nodes_per_panel);
      const double w = pref * block_sum * std::pow(2.0 * m_rep + a + 1.0, d);
      append_row(rows, lambda, weights, row, rule, a, w);
    };
    int first = spec.m_max + 1;
    const double end = spec.tail_extent * (spec.m_max + 1);
    while (first < end) {
      const int next = std::max(first + 1, static_cast<int>(std::lround(first * spec.tail_ratio)));
      double s = 0.0, sm = 0.0;
      for (int m = first; m < next; ++m) {
        const double term = tail_term(m, a);
        s += term;
        sm += term * m;
      }
      add_block(static_cast<int>(std::lround(sm / s)), first, next - 1, s);
      first = next;
    }
    // Mass median of the m^{-2a-2} tail.
    const int m_rep = static_cast<int>(std::lround(first * std::pow(2.0, 1.0 / (2.0 * a + 1.0))));
    add_block(m_rep, first, -1, laguerre_tail_sum(a, first));
  }

  std::ostringstream id;
  id << "spectral:L" << spec.lambda_max << ":mu" << spec.mu_max << ":M" << spec.m_max << ":"
     << spec.panels << "x" << spec.nodes_per_panel << (spec.m_tail ? ":tail" : "") << ":"
     << to_string(spec.norm);
  return std::make_shared<const SpectralGrid>(
      ctx, std::move(rows), Eigen::Map<const Eigen::VectorXd>(lambda.data(), lambda.size()),
      Eigen::Map<const Eigen::VectorXd>(weights.data(), weights.size()), spec.norm, id.str());
}

std::shared_ptr<const SpectralGrid> build_spectral_grid(const AlphaContext& ctx,
                                                        double lambda_max, int m_max,
                                                        int panels, int nodes_per_panel) {
  SpectralGridSpec spec;
  spec.lambda_max = lambda_max;
  spec.m_max = m_max;
  spec.panels = panels;
  spec.nodes_per_panel = nodes_per_panel;
  return build_spectral_grid(ctx, spec);
}

void SpectralSet::validate() const {
  if (!(lambda_lo >= 0.0) || !(lambda_hi > lambda_lo) || !std::isfinite(lambda_hi)) {
    throw DomainError("spectral set: need 0 <= lambda_lo < lambda_hi < inf");
  }
  if (m_set.empty()) throw DomainError("spectral set: m_set is empty");
  if (*m_set.begin() < 0) throw DomainError("spectral set: negative Laguerre index");
}

std::shared_ptr<const SpectralGrid> build_set_grid(const AlphaContext& ctx,
                                                   const SpectralSet& set, GammaNorm norm,
                                                   int panels, int nodes_per_panel) {
  set.validate();
  const double a = ctx.alpha();
  const double pref = gamma_prefactor(ctx, norm);
  const auto rule = composite_gauss_legendre(set.lambda_lo, set.lambda_hi, panels, nodes_per_panel);
  std::vector<SpectralRow> rows;
  std::vector<double> lambda, weights;
  for (int m : set.m_set) {
    SpectralRow row{m, m, m, set.lambda_lo, set.lambda_hi};
    append_row(rows, lambda, weights, row, rule, a, pref * laguerre_at_zero(m, a));
  }
  std::ostringstream id;
  id << "set:[" << set.lambda_lo << "," << set.lambda_hi << "]x{";
  for (auto it = set.m_set.begin(); it != set.m_set.end(); ++it) {
    id << (it == set.m_set.begin() ? "" : ",") << *it;
  }
  id << "}:" << panels << "x" << nodes_per_panel << ":" << to_string(norm);
  return std::make_shared<const SpectralGrid>(
      ctx, std::move(rows), Eigen::Map<const Eigen::VectorXd>(lambda.data(), lambda.size()),
      Eigen::Map<const Eigen::VectorXd>(weights.data(), weights.size()), norm, id.str());
}

SpectralFunction::SpectralFunction(std::shared_ptr<const SpectralGrid> g, Eigen::VectorXd v)
    : grid(std::move(g)), values(std::move(v)) {
  if (!grid) throw ShapeError("SpectralFunction: missing grid");
  if (values.size() != grid->size()) throw ShapeError("SpectralFunction: values do not match grid");
}

double integrate_spectral(const SpectralFunction& g) {
  check_spectral(g);
  return g.values.dot(g.grid->weights());
}

double lp_norm_spectral(const SpectralFunction& g, double p) {
  check_spectral(g);
  if (!(p >= 1.0)) throw DomainError("lp_norm_spectral: p must be >= 1");
  if (std::isinf(p)) return g.values.cwiseAbs().maxCoeff();
  if (p == 2.0) return std::sqrt(g.values.array().square().matrix().dot(g.grid->weights()));
  return std::pow(g.values.array().abs().pow(p).matrix().dot(g.grid->weights()), 1.0 / p);
}

double inner_product_spectral(const SpectralFunction& f, const SpectralFunction& g) {
  check_spectral(f);
  check_spectral(g);
  if (f.grid != g.grid) throw ShapeError("inner_product_spectral: different grids");
  return (f.values.array() * g.values.array()).matrix().dot(f.grid->weights());
}

double gamma_measure_of_set(const AlphaContext& ctx, const SpectralSet& set, GammaNorm norm) {
  if (set.m_set.empty()) throw DomainError("gamma_measure_of_set: empty set");
  if (!(set.lambda_lo >= 0.0) || !(set.lambda_hi >= set.lambda_lo) || *set.m_set.begin() < 0) {
    throw DomainError("gamma_measure_of_set: invalid set");
  }
  const double a = ctx.alpha();
  const double d = 3.0 * a + 2.0;
  double lag = 0.0;
  for (int m : set.m_set) lag += laguerre_at_zero(m, a);
  return gamma_prefactor(ctx, norm) * lag *
         (std::pow(set.lambda_hi, d) - std::pow(set.lambda_lo, d)) / d;
}

// ---------------------------------------------------------------------------

double beta_block(const AlphaContext& ctx) {
  const double a = ctx.alpha();
  return beta_fn((a + 1.0) / 2.0, (2.0 * a + 1.0) / 2.0) /
         (std::pow(4.0, a + 1.0) * kPi * ctx.gamma_alpha_plus_1());
}

double radial_integral(const AlphaContext& ctx, const std::function<double(double)>& F,
                       double r_max) {
  if (!(r_max > 0.0)) throw DomainError("radial_integral: r_max must be positive");
  const double alpha = ctx.alpha();
  // x^2 = rho cos(theta), t = (rho/2) sin(theta): |(x,t)| = sqrt(rho) and
  // dm_alpha = rho^{3 alpha + 1} cos^alpha sin^{2 alpha} 2^{-2 alpha - 1}
  //            d rho d theta / (2 pi Gamma(alpha + 1)).
  // The angular factor separates: its integral is computed once at rho = 1.
  const double angular = tanh_sinh(
      [&](double theta) {
        return std::pow(std::cos(theta), alpha) * std::pow(0.5 * std::sin(theta), 2.0 * alpha);
      },
      0.0, 0.5 * kPi, 1e-14);
  auto radial = [&](double rho) {
    const double value = F(std::sqrt(rho));
    if (value == 0.0) return 0.0;
    return value * 0.5 * std::pow(rho, 3.0 * alpha + 1.0) * angular;
  };
  double total = 0.0;
  if (std::isinf(r_max)) {
    // rho = v / (1 - v) on (0, 1).
    total = tanh_sinh(
        [&](double v) {
          const double w = 1.0 - v;
          if (!(w > 0.0)) return 0.0;
          return radial(v / w) / (w * w);
        },
        0.0, 1.0, 1e-14);
  } else {
    total = tanh_sinh(radial, 0.0, r_max * r_max, 1e-14);
  }
  return total / (2.0 * kPi * ctx.gamma_alpha_plus_1());
}

BallMoment ball_moment(const AlphaContext& ctx, double a, double r) {
  const double alpha = ctx.alpha();
  if (!(a < 3.0 * alpha + 2.0)) throw DivergenceError("ball_moment: requires a < 3 alpha + 2");
  if (!(r > 0.0)) throw DomainError("ball_moment: r must be positive");
  BallMoment result;
  result.oracle = radial_integral(ctx, [a](double n) { return std::pow(n, -2.0 * a); }, r);
  result.paper = beta_block(ctx) / (3.0 * alpha + 2.0 - a) *
                 std::pow(r, 6.0 * alpha + 4.0 - 2.0 * a);
  return result;
}

double tail_moment(const AlphaContext& ctx, double q, double radius) {
  const double alpha = ctx.alpha();
  if (!(q > 6.0 * alpha + 4.0)) throw DivergenceError("tail_moment: requires q > 6 alpha + 4");
  if (!(radius > 0.0)) throw DomainError("tail_moment: radius must be positive");
  // Half the paper's block: the angular integral of cos^a sin^{2a} over
  // [0, pi/2] is B((a+1)/2, (2a+1)/2) / 2.
  const double c = 0.5 * beta_block(ctx);
  return c * std::pow(radius, 6.0 * alpha + 4.0 - q) / (0.5 * q - 3.0 * alpha - 2.0);
}

}  // namespace lbharm
