#include "lbharm/uncertainty.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <numbers>

namespace lbharm {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void require_small_s(const AlphaContext& ctx, double s, const char* where) {
  if (!(s > 0.0) || !(s < ctx.half_dimension())) {
    throw DomainError(std::string(where) + ": requires 0 < s < 3 alpha + 2");
  }
}

void require_large_s(const AlphaContext& ctx, double s, const char* where) {
  if (!(s > ctx.half_dimension()) || !std::isfinite(s)) {
    throw DivergenceError(std::string(where) + ": requires s > 3 alpha + 2");
  }
}

struct Norms {
  double l2 = 0.0;
  double moment = 0.0;
};

Norms space_norms(const std::shared_ptr<const SpaceGrid>& grid, const SpaceFunction& f, double s) {
  Norms n;
  n.l2 = lp_norm_space(SampledFunction::sample(grid, f), 2.0);
  if (n.l2 == 0.0) throw UndefinedRatioError("f is zero on the grid");
  n.moment = moment_norm(grid, f, s);
  return n;
}

// || F_LB(f) chi_E ||_2 on a set grid over `space`.
double restricted_norm(const std::shared_ptr<const SpaceGrid>& space, const SpaceFunction& f,
                       const SpectralSet& set, GammaNorm norm, int panels, int nodes) {
  const auto set_grid = build_set_grid(space->context(), set, norm, panels, nodes);
  const TransformPlan p(space, set_grid);
  return lp_norm_spectral(forward(p, SampledFunction::sample(space, f)), 2.0);
}

// Evaluates `eval` on the base grid and, when present, on the refined one.
template <typename Eval>
InequalityReport with_refinement(const VerifyGrids& grids, Eval&& eval) {
  const auto start = Clock::now();
  InequalityReport rep = eval(grids.space, grids.set_panels, grids.set_nodes);
  rep.grid["space"] = grids.space->id();
  rep.grid["gamma_norm"] = to_string(grids.norm);
  if (grids.refined) {
    InequalityReport fine = eval(grids.refined, 2 * grids.set_panels, grids.set_nodes);
    rep.grid_error_estimate = std::fabs(fine.deciding_ratio() - rep.deciding_ratio());
    rep.values["ratio_refined"] = fine.deciding_ratio();
    rep.grid["refined"] = grids.refined->id();
  }
  rep.finalize();
  rep.runtime_ms = elapsed_ms(start);
  return rep;
}

void set_params(InequalityReport& rep, const AlphaContext& ctx, const SpectralSet* set) {
  rep.params["alpha"] = ctx.alpha();
  if (set) {
    rep.params["lambda_lo"] = set->lambda_lo;
    rep.params["lambda_hi"] = set->lambda_hi;
    std::string ms;
    for (int m : set->m_set) ms += (ms.empty() ? "" : ",") + std::to_string(m);
    rep.labels["m_set"] = ms;
  }
}

}  // namespace

double beta_block(const AlphaContext& ctx, ConstantVariant variant) {
  if (variant == ConstantVariant::paper) return beta_block(ctx);
  static std::mutex mutex;
  static std::map<double, double> cache;
  std::lock_guard lock(mutex);
  const auto it = cache.find(ctx.alpha());
  if (it != cache.end()) return it->second;
  const double value = ctx.half_dimension() * ball_moment(ctx, 0.0, 1.0).oracle;
  cache.emplace(ctx.alpha(), value);
  return value;
}

double constant_K(const AlphaContext& ctx, double s, ConstantVariant variant) {
  require_small_s(ctx, s, "constant_K");
  const double d = ctx.half_dimension();
  const double block = beta_block(ctx, variant);
  return std::pow(block * (d - s) / (s * s), s / (2.0 * d)) * d / (d - s);
}

ConstantN constant_N(const AlphaContext& ctx, double s) {
  require_large_s(ctx, s, "constant_N");
  const double a = ctx.alpha();
  const double d = ctx.half_dimension();
  ConstantN n;
  n.paper = beta_fn((a + 1.0) / 2.0, (2.0 * a + 1.0) / 2.0) * beta_fn((s - d) / s, d / s) /
            (std::pow(4.0, a + 1.0) * s * std::numbers::pi * ctx.gamma_alpha_plus_1());
  n.oracle = radial_integral(ctx, [s](double r) { return 1.0 / (1.0 + std::pow(r, 2.0 * s)); });
  return n;
}

double constant_M(const AlphaContext& ctx, double s, bool use_oracle) {
  require_large_s(ctx, s, "constant_M");
  const double d = ctx.half_dimension();
  const ConstantN n = constant_N(ctx, s);
  const double nn = use_oracle ? n.oracle : n.paper;
  return std::sqrt(nn * s / (s - d) * std::pow((s - d) / d, d / s));
}

double constant_M_displayed(const AlphaContext& ctx, double s) {
  require_large_s(ctx, s, "constant_M_displayed");
  const double a = ctx.alpha();
  const double d = ctx.half_dimension();
  const double b1 = beta_fn((a + 1.0) / 2.0, (2.0 * a + 1.0) / 2.0);
  const double b2 = beta_fn((s - d) / s, d / s);
  return std::sqrt(b1 * b2 / (std::pow(4.0, a + 1.0) * std::numbers::pi * ctx.gamma_alpha_plus_1() * (s - d)) *
                   std::pow((s - d) / d, d / s));
}

double constant_C_critical(const AlphaContext& ctx) {
  const double d = ctx.half_dimension();
  return d * d * std::pow(d - 1.0, -1.0 / (2.0 * d) - 1.0) *
         std::pow(beta_block(ctx), 1.0 / (2.0 * d));
}

double constant_C_composed(const AlphaContext& ctx, ConstantVariant variant) {
  const double d = ctx.half_dimension();
  return constant_K(ctx, 1.0, variant) * d * std::pow(d - 1.0, 1.0 / d - 1.0);
}

double bound_profile(const AlphaContext& ctx, double s, double gamma_e, double r,
                     ConstantVariant variant) {
  require_small_s(ctx, s, "bound_profile");
  if (!(r > 0.0)) throw DomainError("bound_profile: r must be positive");
  if (!(gamma_e > 0.0)) throw DomainError("bound_profile: gamma(E) must be positive");
  const double d = ctx.half_dimension();
  const double coeff = std::sqrt(beta_block(ctx, variant) * gamma_e / (d - s));
  return std::pow(r, -s) + coeff * std::pow(r, d - s);
}

double bound_profile_argmin(const AlphaContext& ctx, double s, double gamma_e,
                            ConstantVariant variant) {
  require_small_s(ctx, s, "bound_profile_argmin");
  if (!(gamma_e > 0.0)) throw DomainError("bound_profile_argmin: gamma(E) must be positive");
  const double d = ctx.half_dimension();
  const double inner = beta_block(ctx, variant) * gamma_e / (d - s);
  return std::pow(s / (d - s), 1.0 / d) * std::pow(inner, -1.0 / (2.0 * d));
}

double moment_norm(std::shared_ptr<const SpaceGrid> grid, const SpaceFunction& f, double s) {
  return lp_norm_space(SampledFunction::sample(std::move(grid),
                                               [&](double x, double t) {
                                                 return std::pow(homogeneous_norm(x, t), s) * f(x, t);
                                               }),
                       2.0);
}

namespace {

struct HeisenbergSides {
  double l2 = 0.0;
  SpectralFunction spectrum;
  std::shared_ptr<const SpaceGrid> space;
};

HeisenbergSides heisenberg_sides(const TransformPlan& p, const SpaceFunction& f) {
  HeisenbergSides out;
  out.space = p.space_grid();
  const SampledFunction fs = SampledFunction::sample(out.space, f);
  out.l2 = lp_norm_space(fs, 2.0);
  if (out.l2 == 0.0) throw UndefinedRatioError("heisenberg_ratio: f is zero");
  out.spectrum = forward(p, fs);
  return out;
}

double heisenberg_lhs(const HeisenbergSides& sides, const SpaceFunction& f, double a, double b) {
  const double space_moment = moment_norm(sides.space, f, a);
  const double spectral_moment = lp_norm_spectral(apply_L_power_spectral(b, sides.spectrum), 2.0);
  return std::pow(space_moment, 2.0 * b / (a + 2.0 * b)) * std::pow(spectral_moment, a / (a + 2.0 * b));
}

}  // namespace

std::vector<InequalityReport> heisenberg_sweep(const TransformPlan& plan, const TransformPlan* refined,
                                               const SpaceFunction& f,
                                               const std::vector<std::pair<double, double>>& ab) {
  for (const auto& [a, b] : ab) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("heisenberg_ratio: requires a, b > 0");
  }
  const auto start = Clock::now();
  const HeisenbergSides base = heisenberg_sides(plan, f);
  std::optional<HeisenbergSides> fine;
  if (refined) fine = heisenberg_sides(*refined, f);
  const double setup_ms = elapsed_ms(start);

  std::vector<InequalityReport> out;
  for (const auto& [a, b] : ab) {
    const auto t0 = Clock::now();
    InequalityReport rep;
    rep.name = "heisenberg";
    rep.kind = InequalityReport::Kind::lower;
    rep.lhs = heisenberg_lhs(base, f, a, b);
    rep.rhs_paper = base.l2;
    rep.params = {{"alpha", plan.context().alpha()}, {"a", a}, {"b", b}};
    rep.grid["space"] = plan.space_grid()->id();
    rep.grid["spectral"] = plan.spectral_grid()->id();
    if (fine) {
      const double ratio_fine = heisenberg_lhs(*fine, f, a, b) / fine->l2;
      rep.grid_error_estimate = std::fabs(ratio_fine - rep.lhs / rep.rhs_paper);
      rep.values["ratio_refined"] = ratio_fine;
      rep.grid["refined_space"] = refined->space_grid()->id();
      rep.grid["refined_spectral"] = refined->spectral_grid()->id();
    }
    rep.finalize();
    rep.runtime_ms = elapsed_ms(t0) + setup_ms / static_cast<double>(ab.size());
    out.push_back(std::move(rep));
  }
  return out;
}

InequalityReport heisenberg_ratio(const TransformPlan& plan, const TransformPlan* refined,
                                  const SpaceFunction& f, double a, double b) {
  return heisenberg_sweep(plan, refined, f, {{a, b}}).front();
}

InequalityReport interpolation_check(const VerifyGrids& grids, const SpaceFunction& f, double s) {
  if (!(s > 1.0)) throw DomainError("interpolation_check: requires s > 1");
  const AlphaContext& ctx = grids.space->context();
  return with_refinement(grids, [&](const std::shared_ptr<const SpaceGrid>& space, int, int) {
    const Norms n = space_norms(space, f, s);
    InequalityReport rep;
    rep.name = "interpolation";
    rep.lhs = moment_norm(space, f, 1.0);
    const double c = s * std::pow(s - 1.0, 1.0 / s - 1.0);
    rep.rhs_paper = c * std::pow(n.l2, 1.0 - 1.0 / s) * std::pow(n.moment, 1.0 / s);
    rep.params["s"] = s;
    rep.values["constant"] = c;
    set_params(rep, ctx, nullptr);
    rep.finalize();
    return rep;
  });
}

InequalityReport local_small_s(const VerifyGrids& grids, const SpaceFunction& f,
                               const SpectralSet& set, double s) {
  const AlphaContext& ctx = grids.space->context();
  require_small_s(ctx, s, "local_small_s");
  set.validate();
  const double d = ctx.half_dimension();
  const double gamma_e = gamma_measure_of_set(ctx, set, grids.norm);
  const double k_paper = constant_K(ctx, s, ConstantVariant::paper);
  const double k_oracle = constant_K(ctx, s, ConstantVariant::oracle);
  return with_refinement(grids, [&](const std::shared_ptr<const SpaceGrid>& space, int panels, int nodes) {
    const Norms n = space_norms(space, f, s);
    InequalityReport rep;
    rep.name = "local_small_s";
    rep.lhs = restricted_norm(space, f, set, grids.norm, panels, nodes);
    const double tail = std::pow(gamma_e, s / (2.0 * d)) * n.moment;
    rep.rhs_paper = k_paper * tail;
    rep.rhs_oracle = k_oracle * tail;
    rep.params["s"] = s;
    rep.values = {{"K_paper", k_paper}, {"K_oracle", k_oracle}, {"gamma_E", gamma_e},
                  {"K_ratio_oracle_paper", k_oracle / k_paper}};
    set_params(rep, ctx, &set);
    rep.finalize();
    return rep;
  });
}

InequalityReport lemma512_ratio(const VerifyGrids& grids, const SpaceFunction& f, double s) {
  const AlphaContext& ctx = grids.space->context();
  require_large_s(ctx, s, "lemma512_ratio");
  const double d = ctx.half_dimension();
  const ConstantN n = constant_N(ctx, s);
  const double m_paper = constant_M(ctx, s, false);
  const double m_oracle = constant_M(ctx, s, true);
  InequalityReport rep = with_refinement(grids, [&](const std::shared_ptr<const SpaceGrid>& space, int, int) {
    const Norms nm = space_norms(space, f, s);
    const double l1 = lp_norm_space(SampledFunction::sample(space, f), 1.0);
    if (!std::isfinite(l1) || !std::isfinite(nm.moment)) {
      throw AccuracyError("lemma512_ratio: norms are not finite on the grid");
    }
    InequalityReport r;
    r.name = "lemma512";
    r.lhs = l1;
    const double shape = std::pow(nm.l2, 1.0 - d / s) * std::pow(nm.moment, d / s);
    r.rhs_paper = m_paper * shape;
    r.rhs_oracle = m_oracle * shape;
    const double cs = nm.l2 * nm.l2 + nm.moment * nm.moment;
    r.values = {{"N_paper", n.paper},
                {"N_oracle", n.oracle},
                {"M_paper", m_paper},
                {"M_oracle", m_oracle},
                {"cs_lhs", l1 * l1},
                {"cs_rhs_paper", n.paper * cs},
                {"cs_rhs_oracle", n.oracle * cs},
                {"cs_ratio_paper", l1 * l1 / (n.paper * cs)},
                {"cs_ratio_oracle", l1 * l1 / (n.oracle * cs)},
                {"N_ratio_oracle_paper", n.oracle / n.paper}};
    r.params["s"] = s;
    set_params(r, ctx, nullptr);
    r.finalize();
    return r;
  });
  return rep;
}

InequalityReport local_large_s(const VerifyGrids& grids, const SpaceFunction& f,
                               const SpectralSet& set, double s) {
  const AlphaContext& ctx = grids.space->context();
  require_large_s(ctx, s, "local_large_s");
  set.validate();
  const double d = ctx.half_dimension();
  const double gamma_e = gamma_measure_of_set(ctx, set, grids.norm);
  const double m_paper = constant_M(ctx, s, false);
  const double m_oracle = constant_M(ctx, s, true);
  return with_refinement(grids, [&](const std::shared_ptr<const SpaceGrid>& space, int panels, int nodes) {
    const Norms n = space_norms(space, f, s);
    InequalityReport rep;
    rep.name = "local_large_s";
    rep.lhs = restricted_norm(space, f, set, grids.norm, panels, nodes);
    const double shape = std::sqrt(gamma_e) * std::pow(n.l2, 1.0 - d / s) * std::pow(n.moment, d / s);
    rep.rhs_paper = m_paper * shape;
    rep.rhs_oracle = m_oracle * shape;
    rep.params["s"] = s;
    rep.values = {{"M_paper", m_paper}, {"M_oracle", m_oracle}, {"gamma_E", gamma_e}};
    set_params(rep, ctx, &set);
    rep.finalize();
    return rep;
  });
}

InequalityReport local_critical(const VerifyGrids& grids, const SpaceFunction& f,
                                const SpectralSet& set) {
  const AlphaContext& ctx = grids.space->context();
  set.validate();
  const double d = ctx.half_dimension();
  const double gamma_e = gamma_measure_of_set(ctx, set, grids.norm);
  const double c_paper = constant_C_critical(ctx);
  const double c_composed_paper = constant_C_composed(ctx, ConstantVariant::paper);
  const double c_oracle = constant_C_composed(ctx, ConstantVariant::oracle);
  return with_refinement(grids, [&](const std::shared_ptr<const SpaceGrid>& space, int panels, int nodes) {
    const Norms n = space_norms(space, f, d);
    InequalityReport rep;
    rep.name = "local_critical";
    rep.lhs = restricted_norm(space, f, set, grids.norm, panels, nodes);
    const double shape = std::pow(gamma_e, 1.0 / (2.0 * d)) * std::pow(n.l2, (d - 1.0) / d) *
                         std::pow(n.moment, 1.0 / d);
    rep.rhs_paper = c_paper * shape;
    rep.rhs_oracle = c_oracle * shape;
    rep.params["s"] = d;
    rep.values = {{"C_paper", c_paper},
                  {"C_composed_paper_block", c_composed_paper},
                  {"C_oracle", c_oracle},
                  {"gamma_E", gamma_e}};
    set_params(rep, ctx, &set);
    rep.finalize();
    return rep;
  });
}

}  // namespace lbharm
