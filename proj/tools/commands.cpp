#include "commands.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include "lbharm/errors.hpp"
#include "lbharm/heat.hpp"
#include "lbharm/quadrature.hpp"
#include "lbharm/specfun.hpp"
#include "lbharm/test_family.hpp"
#include "lbharm/uncertainty.hpp"
#include "report_io.hpp"

namespace lbharm::cli {

using nlohmann::json;

namespace {

struct Check {
  std::string name;
  std::string subject;
  double value = 0.0;
  double tolerance = 0.0;
  // "<=" or ">="
  std::string relation = "<=";
  bool passed = false;
  std::string message;
};

json to_json(const Check& c) {
  json out = {{"name", c.name},         {"subject", c.subject}, {"value", c.value},
              {"tolerance", c.tolerance}, {"relation", c.relation}, {"passed", c.passed}};
  if (!c.message.empty()) out["message"] = c.message;
  return out;
}

Check check_le(std::string name, std::string subject, double value, double tol) {
  return {std::move(name), std::move(subject), value, tol, "<=", value <= tol, ""};
}

Check check_ge(std::string name, std::string subject, double value, double bound) {
  return {std::move(name), std::move(subject), value, bound, ">=", value >= bound, ""};
}

Check failed(std::string name, std::string subject, const std::string& message) {
  Check c{std::move(name), std::move(subject), std::nan(""), 0.0, "<=", false, message};
  return c;
}

// A report passes when satisfied; strict inequalities also need the margin.
bool report_passes(const InequalityReport& r, bool require_strict) {
  return r.satisfied() && (!require_strict || r.strict);
}

struct Outcome {
  std::vector<InequalityReport> reports;
  std::vector<bool> require_strict;
  std::vector<Check> checks;

  void add(InequalityReport r, bool strict) {
    reports.push_back(std::move(r));
    require_strict.push_back(strict);
  }
  void append(Outcome&& o) {
    for (std::size_t i = 0; i < o.reports.size(); ++i) add(std::move(o.reports[i]), o.require_strict[i]);
    for (auto& c : o.checks) checks.push_back(std::move(c));
  }
};

class Document {
 public:
  Document(const RunConfig& config, const std::string& command) {
    doc_["command"] = command;
    doc_["config"] = to_json(config);
    doc_["test_family_version"] = kTestFamilyVersion;
    doc_["reports"] = json::array();
    doc_["checks"] = json::array();
    doc_["values"] = json::object();
    doc_["warnings"] = json::array();
  }

  void add(const Outcome& o) {
    for (std::size_t i = 0; i < o.reports.size(); ++i) {
      json r = cli::to_json(o.reports[i]);
      r["passed"] = report_passes(o.reports[i], o.require_strict[i]);
      r["requires_strict"] = static_cast<bool>(o.require_strict[i]);
      passed_ = passed_ && r["passed"].get<bool>();
      doc_["reports"].push_back(std::move(r));
    }
    for (const auto& c : o.checks) add(c);
  }
  void add(const Check& c) {
    passed_ = passed_ && c.passed;
    doc_["checks"].push_back(to_json(c));
  }
  json& values() { return doc_["values"]; }
  void warn(const std::string& message) { doc_["warnings"].push_back(message); }

  RunResult finish() {
    doc_["passed"] = passed_;
    return {passed_ ? 0 : 1, std::move(doc_)};
  }

 private:
  json doc_;
  bool passed_ = true;
};

// Numerical failures are recorded as failed checks instead of aborting.
template <typename F>
void guarded(Outcome& out, const std::string& name, const std::string& subject, F&& body) {
  try {
    body();
  } catch (const UndefinedRatioError& e) {
    out.checks.push_back(failed(name, subject, e.what()));
  } catch (const AccuracyError& e) {
    out.checks.push_back(failed(name, subject, e.what()));
  } catch (const RangeError& e) {
    out.checks.push_back(failed(name, subject, e.what()));
  }
}

std::vector<std::string> fast_members() {
  std::vector<std::string> out;
  const AlphaContext ctx(0.0);
  for (const auto& n : family_names()) {
    if (!family_member(ctx, n).slow_decay) out.push_back(n);
  }
  return out;
}

std::vector<std::string> family_or(const RunConfig& c, std::vector<std::string> fallback) {
  return c.test_family ? *c.test_family : fallback;
}

double relative_l2(const SampledFunction& a, const SampledFunction& b) {
  const double na = lp_norm_space(b, 2.0);
  const Eigen::MatrixXd diff = a.values - b.values;
  return std::sqrt((diff.array().square() * b.grid->weights().array()).sum()) / na;
}

std::shared_ptr<const SpaceGrid> square_grid(const AlphaContext& ctx, double extent, int panels, int nodes) {
  return build_space_grid(ctx, extent, extent, panels, panels, nodes);
}

// ---------------------------------------------------------------------------
// specfun

RunResult run_specfun(const RunConfig& c) {
  Document doc(c, "specfun");
  Outcome out;
  const AlphaContext ctx(c.alpha);

  double cos_err = 0.0, sinc_err = 0.0, even_err = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double x = 20.0 * k / 99.0;
    cos_err = std::max(cos_err, std::fabs(bessel_normalized(-0.5, x) - std::cos(x)));
    const double sinc = x == 0.0 ? 1.0 : std::sin(x) / x;
    sinc_err = std::max(sinc_err, std::fabs(bessel_normalized(0.5, x) - sinc));
    for (double nu : {-0.5, 0.0, 0.3, 1.0, 2.5}) {
      even_err = std::max(even_err, std::fabs(bessel_normalized(nu, x) - bessel_normalized(nu, -x)));
    }
  }
  out.checks.push_back(check_le("bessel_cos", "j_{-1/2}", cos_err, c.tolerance("specfun_bessel")));
  out.checks.push_back(check_le("bessel_sinc", "j_{1/2}", sinc_err, c.tolerance("specfun_bessel")));
  out.checks.push_back(check_le("bessel_even", "j_nu", even_err, c.tolerance("specfun_bessel")));

  double rec_err = 0.0;
  for (double a : {0.0, 0.5, 1.0, 2.0}) {
    for (int m = 0; m <= 20; ++m) {
      for (int k = 0; k <= 80; ++k) {
        const double x = 0.25 * k;
        const double exact = static_cast<double>(laguerre_poly_explicit(m, a, x));
        if (std::fabs(exact) < 1e-12) continue;
        rec_err = std::max(rec_err, std::fabs(laguerre_poly(m, a, x) - exact) / std::fabs(exact));
      }
    }
  }
  out.checks.push_back(check_le("laguerre_recurrence", "L_m^alpha", rec_err, c.tolerance("specfun_recurrence")));

  const double gen_sets[3][3] = {{0.0, 0.0, 3.0}, {0.0, 0.5, 1.0}, {1.0, 0.5, 1.0}};
  for (const auto& g : gen_sets) {
    const auto [partial, closed] = generating_function_check(g[0], g[1], g[2], 80);
    std::ostringstream subject;
    subject << "alpha=" << g[0] << " t=" << g[1] << " x=" << g[2];
    out.checks.push_back(check_le("generating_function", subject.str(),
                                  std::fabs(partial - closed) / std::fabs(closed),
                                  c.tolerance("specfun_generating")));
  }

  double bound = 0.0;
  for (double a : {0.0, 0.5, 1.0, 2.0}) {
    for (int m = 0; m <= 60; ++m) {
      for (int k = 0; k <= 2000; ++k) bound = std::max(bound, std::fabs(laguerre_function(m, a, 0.1 * k)));
    }
  }
  out.checks.push_back(check_le("laguerre_function_bound", "Lcal_m^alpha", bound - 1.0, c.tolerance("specfun_bound")));

  double d1 = 0.0, d2 = 0.0;
  for (double lambda : {0.3, 0.7, 1.0, 1.6, 2.5}) {
    for (int m : {0, 1, 2, 4, 7}) {
      for (double x : {0.2, 1.3, 3.0}) {
        for (double t : {0.2, 1.1, 3.0}) {
          const PdeResidual r = eigenfunction_pde_residual(ctx, lambda, m, x, t);
          d1 = std::max(d1, r.d1 / (1.0 + lambda * lambda));
          d2 = std::max(d2, r.d2 / (1.0 + eigenvalue_L(ctx, lambda, m)));
        }
      }
    }
  }
  out.checks.push_back(check_le("pde_d1", "phi", d1, c.tolerance("pde_d1")));
  out.checks.push_back(check_le("pde_d2", "phi", d2, c.tolerance("pde_d2")));

  const SpecfunConfig& sf = c.specfun;
  if (!sf.function.empty()) {
    json rows = json::array();
    for (double x : sf.x) {
      double v = 0.0;
      if (sf.function == "gamma") {
        v = gamma_fn(x);
      } else if (sf.function == "bessel") {
        v = bessel_normalized(sf.nu, x);
      } else if (sf.function == "laguerre") {
        v = laguerre_poly(sf.m, c.alpha, x);
      } else if (sf.function == "laguerre_function") {
        v = laguerre_function(sf.m, c.alpha, x);
      } else {
        v = eigenfunction(ctx, sf.lambda, sf.m, x, sf.t);
      }
      rows.push_back({{"x", x}, {"value", v}});
    }
    doc.values()["function"] = sf.function;
    doc.values()["evaluations"] = rows;
  }
  doc.add(out);
  return doc.finish();
}

// ---------------------------------------------------------------------------
// transform, plancherel

RunResult run_transform(const RunConfig& c) {
  Document doc(c, "transform");
  const AlphaContext ctx(c.alpha);
  const auto p = plan(build_space_grid(ctx, c.grid.space), build_spectral_grid(ctx, c.grid.spectral));
  const double lambdas[] = {0.0, 0.5, 1.0, 2.0};
  for (const auto& name : family_or(c, {"gauss"})) {
    Outcome out;
    guarded(out, "transform", name, [&] {
      const TestFunction tf = family_member(ctx, name);
      const SampledFunction fs = SampledFunction::sample(p->space_grid(), tf.f);
      const double integral = integrate_space(fs);
      const SpectralFunction ff = forward(*p, fs);
      const double defect = plancherel_defect(*p, fs);
      const double round_trip = relative_l2(inverse(*p, ff), fs);
      double lambda0 = 0.0;
      json spectrum = json::array();
      for (int m = 0; m <= 3; ++m) {
        lambda0 = std::max(lambda0, std::fabs(forward_at(fs, 0.0, m) - integral) / std::fabs(integral));
        for (double l : lambdas) spectrum.push_back({{"lambda", l}, {"m", m}, {"value", forward_at(fs, l, m)}});
      }
      doc.values()[name] = {{"integral", integral},
                            {"plancherel_defect", defect},
                            {"round_trip_error", round_trip},
                            {"spectrum", spectrum}};
      out.checks.push_back(check_le("plancherel_defect", name, defect, c.tolerance("plancherel")));
      out.checks.push_back(check_le("round_trip", name, round_trip, c.tolerance("round_trip")));
      out.checks.push_back(check_le("lambda0_identity", name, lambda0, c.tolerance("lambda0_identity")));
    });
    doc.add(out);
  }
  doc.values()["grid"] = {{"space", p->space_grid()->id()}, {"spectral", p->spectral_grid()->id()}};
  return doc.finish();
}

RunResult run_plancherel(const RunConfig& c) {
  Document doc(c, "plancherel");
  const AlphaContext ctx(c.alpha);
  const auto p = plan(build_space_grid(ctx, c.grid.space), build_spectral_grid(ctx, c.grid.spectral));
  std::shared_ptr<const TransformPlan> fine;
  if (c.refine.value_or(true)) {
    fine = plan(build_space_grid(ctx, refine(c.grid.space)), build_spectral_grid(ctx, refine(c.grid.spectral)));
  }
  for (const auto& name : family_or(c, {"gauss"})) {
    Outcome out;
    guarded(out, "plancherel_defect", name, [&] {
      const TestFunction tf = family_member(ctx, name);
      const double defect = plancherel_defect(*p, SampledFunction::sample(p->space_grid(), tf.f));
      json v = {{"defect", defect}};
      if (fine) v["defect_refined"] = plancherel_defect(*fine, SampledFunction::sample(fine->space_grid(), tf.f));
      doc.values()[name] = v;
      out.checks.push_back(check_le("plancherel_defect", name, defect, c.tolerance("plancherel")));
    });
    doc.add(out);
  }
  return doc.finish();
}

// ---------------------------------------------------------------------------
// convolve, young

struct ConvolutionGrids {
  std::shared_ptr<const SpaceGrid> output;
  std::shared_ptr<const SpaceGrid> integration;
  ConvolutionSetup direct;
  ConvolutionSetup spectral;
};

ConvolutionGrids convolution_grids(const RunConfig& c, const SpaceGridSpec& space,
                                   const SpectralGridSpec& spectral, int scale) {
  const AlphaContext ctx(c.alpha);
  const ConvolutionConfig& cv = c.convolution;
  ConvolutionGrids g;
  g.output = square_grid(ctx, cv.output_max, cv.output_panels * scale, cv.output_nodes);
  g.integration = square_grid(ctx, cv.integration_max, cv.integration_panels * scale, cv.integration_nodes);
  g.direct.direct = true;
  g.direct.integration = g.integration;
  g.direct.output = g.output;
  g.direct.n_theta = cv.n_theta * scale;
  const auto sg = build_spectral_grid(ctx, spectral);
  g.spectral.analysis = plan(build_space_grid(ctx, space), sg);
  g.spectral.synthesis = plan(g.output, sg);
  return g;
}

bool use_direct(const RunConfig& c) {
  return c.convolution.method == "direct" || (c.convolution.method == "auto" && c.alpha == 0.0);
}

RunResult run_convolve(const RunConfig& c) {
  Document doc(c, "convolve");
  const AlphaContext ctx(c.alpha);
  Outcome out;
  guarded(out, "convolve", c.f + "*" + c.g, [&] {
    const ConvolutionGrids g = convolution_grids(c, c.grid.space, c.grid.spectral, 1);
    const SpaceFunction f = family_member(ctx, c.f).f;
    const SpaceFunction h = family_member(ctx, c.g).f;
    const SampledFunction fg = g.spectral.convolve(f, h);
    const SampledFunction gf = g.spectral.convolve(h, f);
    const double comm = relative_l2(gf, fg);
    out.checks.push_back(check_le("commutativity", c.f + "*" + c.g, comm, c.tolerance("commutativity")));
    json v = {{"spectral_l1", lp_norm_space(fg, 1.0)}, {"spectral_l2", lp_norm_space(fg, 2.0)},
              {"commutativity", comm}, {"output_grid", g.output->id()}};
    if (c.alpha == 0.0 && c.convolution.method != "spectral") {
      const SampledFunction direct = g.direct.convolve(f, h);
      const double agreement = relative_l2(fg, direct);
      v["direct_l1"] = lp_norm_space(direct, 1.0);
      v["direct_l2"] = lp_norm_space(direct, 2.0);
      v["direct_vs_spectral"] = agreement;
      out.checks.push_back(check_le("direct_vs_spectral", c.f + "*" + c.g, agreement,
                                    c.tolerance("convolution_agreement")));
    }
    doc.values() = v;
  });
  doc.add(out);
  return doc.finish();
}

RunResult run_young(const RunConfig& c) {
  Document doc(c, "young");
  const AlphaContext ctx(c.alpha);
  Outcome out;
  guarded(out, "young", c.f + "*" + c.g, [&] {
    const ConvolutionGrids base = convolution_grids(c, c.grid.space, c.grid.spectral, 1);
    const SpaceFunction f = family_member(ctx, c.f).f;
    const SpaceFunction h = family_member(ctx, c.g).f;
    std::vector<InequalityReport> reps;
    if (use_direct(c)) {
      reps = young_checks(base.direct, base.spectral, f, h, c.exponents);
    } else if (c.alpha == 0.0) {
      reps = young_checks(base.spectral, base.direct, f, h, c.exponents);
    } else {
      const ConvolutionGrids fine = convolution_grids(c, refine(c.grid.space), refine(c.grid.spectral), 2);
      reps = young_checks(base.spectral, fine.spectral, f, h, c.exponents);
    }
    for (auto& r : reps) {
      r.labels["f"] = c.f;
      r.labels["g"] = c.g;
      out.add(std::move(r), false);
    }
  });
  doc.add(out);
  return doc.finish();
}

// ---------------------------------------------------------------------------
// heat

RunResult run_heat(const RunConfig& c) {
  Document doc(c, "heat");
  const AlphaContext ctx(c.alpha);
  const double s = c.s.value_or(1.0);
  const auto p = plan(build_space_grid(ctx, c.grid.space), build_spectral_grid(ctx, c.grid.spectral));
  if (auto w = heat_small_s_warning(*p->spectral_grid(), s)) doc.warn(*w);
  const bool all = c.check == "all";
  Outcome out;
  const std::string subject = "s=" + json(s).dump();
  guarded(out, "heat", subject, [&] {
    if (all || c.check == "mass") {
      const SampledFunction h = heat_kernel(*p, s);
      const double mass = integrate_space(h);
      const double max = h.values.maxCoeff();
      const double min = h.values.minCoeff();
      doc.values()["mass"] = mass;
      doc.values()["min_over_max"] = min / max;
      out.checks.push_back(check_le("heat_mass", subject, std::fabs(mass - 1.0), c.tolerance("heat_mass")));
      out.checks.push_back(check_ge("heat_nonnegative", subject, min / max, -c.tolerance("heat_negativity")));
    }
    if (all || c.check == "semigroup") {
      const auto& grid = p->spectral_grid();
      const SpectralFunction m1 = heat_multiplier(grid, 0.4 * s);
      const SpectralFunction m2 = heat_multiplier(grid, 0.6 * s);
      const SpectralFunction m12 = heat_multiplier(grid, s);
      const double mult = (m1.values.cwiseProduct(m2.values) - m12.values).cwiseAbs().maxCoeff();
      const SpectralFunction ff =
          forward(*p, SampledFunction::sample(p->space_grid(), family_member(ctx, "gauss").f));
      const SpectralFunction two = heat_apply_spectral(0.4 * s, heat_apply_spectral(0.6 * s, ff));
      const SpectralFunction one = heat_apply_spectral(s, ff);
      const double apply = (two.values - one.values).cwiseAbs().maxCoeff() / one.values.cwiseAbs().maxCoeff();
      doc.values()["semigroup_multiplier"] = mult;
      doc.values()["semigroup_apply"] = apply;
      out.checks.push_back(check_le("heat_semigroup_multiplier", subject, mult, c.tolerance("heat_semigroup")));
      out.checks.push_back(check_le("heat_semigroup_apply", subject, apply, c.tolerance("heat_semigroup")));
    }
    if (all || c.check == "norm") {
      const GammaNorm norm = p->spectral_grid()->norm();
      const double closed = heat_l2_norm_sq(ctx, s, 16, norm);
      const double spectral = std::pow(lp_norm_spectral(heat_multiplier(p->spectral_grid(), s), 2.0), 2.0);
      const double space = std::pow(lp_norm_space(heat_kernel(*p, s), 2.0), 2.0);
      doc.values()["l2_norm_sq_closed_form"] = closed;
      doc.values()["l2_norm_sq_spectral"] = spectral;
      doc.values()["l2_norm_sq_space"] = space;
      out.checks.push_back(check_le("heat_norm_spectral", subject, std::fabs(spectral - closed) / closed,
                                    c.tolerance("heat_norm_spectral")));
      out.checks.push_back(
          check_le("heat_norm_space", subject, std::fabs(space - closed) / closed, c.tolerance("heat_norm")));
    }
    if (all || c.check == "pde") {
      const double residual = heat_equation_residual(*p, s);
      doc.values()["pde_residual"] = residual;
      out.checks.push_back(check_le("heat_pde", subject, residual, c.tolerance("heat_pde")));
    }
  });
  doc.values()["grid"] = {{"space", p->space_grid()->id()}, {"spectral", p->spectral_grid()->id()}};
  doc.add(out);
  return doc.finish();
}

// ---------------------------------------------------------------------------
// constants

RunResult run_constants(const RunConfig& c) {
  Document doc(c, "constants");
  const AlphaContext ctx(c.alpha);
  const double d = ctx.half_dimension();
  json& v = doc.values();
  v["dimension"] = d;
  v["beta_block_paper"] = beta_block(ctx, ConstantVariant::paper);
  v["beta_block_oracle"] = beta_block(ctx, ConstantVariant::oracle);
  v["beta_block_ratio_oracle_paper"] = v["beta_block_oracle"].get<double>() / v["beta_block_paper"].get<double>();
  v["C_paper"] = constant_C_critical(ctx);
  v["C_composed_paper_block"] = constant_C_composed(ctx, ConstantVariant::paper);
  v["C_oracle"] = constant_C_composed(ctx, ConstantVariant::oracle);
  v["ball_moment_ratio_oracle_paper"] = ball_moment(ctx, 0.0, 1.0).ratio();
  Outcome out;
  if (c.s) {
    const double s = *c.s;
    v["s"] = s;
    if (s < d) {
      v["K"] = constant_K(ctx, s, ConstantVariant::paper);
      v["K_oracle"] = constant_K(ctx, s, ConstantVariant::oracle);
    } else if (s > d) {
      const ConstantN n = constant_N(ctx, s);
      v["N"] = n.paper;
      v["N_oracle"] = n.oracle;
      v["N_ratio_oracle_paper"] = n.oracle / n.paper;
      const double m = constant_M(ctx, s, false);
      const double displayed = constant_M_displayed(ctx, s);
      v["M"] = m;
      v["M_oracle"] = constant_M(ctx, s, true);
      v["M_displayed"] = displayed;
      out.checks.push_back(check_le("M_matches_displayed_formula", "s=" + json(s).dump(),
                                    std::fabs(m - displayed) / displayed, c.tolerance("constants_identity")));
    } else {
      v["C"] = constant_C_critical(ctx);
    }
  }
  doc.add(out);
  return doc.finish();
}

// ---------------------------------------------------------------------------
// verify, sweep

struct Shared {
  const RunConfig* config = nullptr;
  AlphaContext ctx{0.0};
  VerifyGrids fast;
  VerifyGrids slow;
  std::shared_ptr<const TransformPlan> heisenberg;
  std::shared_ptr<const TransformPlan> heisenberg_refined;
};

struct Job {
  std::string verify;
  std::string member;
  double s = 0.0;
  SpectralSet set;
  std::vector<std::pair<double, double>> ab;
};

double default_s(const std::string& verify, double d) {
  if (verify == "local-small" || verify == "profile") return 0.5 * d;
  if (verify == "interpolation") return 2.0;
  if (verify == "local-critical") return d;
  return 2.0 * d;
}

std::vector<std::string> default_members(const std::string& verify) {
  if (verify == "heisenberg") return fast_members();
  if (verify == "lemma-extremal") return {"extremal"};
  if (verify == "profile") return {"none"};
  return family_names();
}

TestFunction job_function(const Shared& sh, const Job& job) {
  if (job.verify == "lemma-extremal") return {"extremal", extremal_function(job.s), true};
  const bool s_sets_extremal = job.verify == "lemma" || job.verify == "local-large";
  return family_member(sh.ctx, job.member, s_sets_extremal ? job.s : 2.0 * sh.ctx.half_dimension());
}

const VerifyGrids& grids_for(const Shared& sh, const TestFunction& tf) {
  return tf.slow_decay && sh.config->grid.graded_tail ? sh.slow : sh.fast;
}

void label(InequalityReport& r, const Job& job, double dilation = 1.0) {
  r.labels["function"] = job.member;
  r.labels["verify"] = job.verify;
  if (dilation != 1.0) r.params["dilation"] = dilation;
}

Outcome run_job(const Shared& sh, const Job& job) {
  const RunConfig& c = *sh.config;
  Outcome out;
  const std::string subject = job.verify + ":" + job.member;
  guarded(out, job.verify, subject, [&] {
    if (job.verify == "profile") {
      const double gamma_e = gamma_measure_of_set(sh.ctx, job.set, sh.fast.norm);
      const double d = sh.ctx.half_dimension();
      for (ConstantVariant variant : {ConstantVariant::paper, ConstantVariant::oracle}) {
        const std::string tag = variant == ConstantVariant::paper ? "paper" : "oracle";
        const double r0 = bound_profile_argmin(sh.ctx, job.s, gamma_e, variant);
        const double g0 = bound_profile(sh.ctx, job.s, gamma_e, r0, variant);
        const double expected = constant_K(sh.ctx, job.s, variant) * std::pow(gamma_e, job.s / (2.0 * d));
        out.checks.push_back(check_le("profile_identity_" + tag, "s=" + json(job.s).dump(),
                                      std::fabs(g0 - expected) / expected, c.tolerance("profile_identity")));
        auto g = [&](double r) { return bound_profile(sh.ctx, job.s, gamma_e, r, variant); };
        const double found = golden_section_minimize(g, r0 / 10.0, 10.0 * r0, 1e-12);
        out.checks.push_back(check_le("profile_argmin_" + tag, "s=" + json(job.s).dump(),
                                      std::fabs(found - r0) / r0, c.tolerance("profile_argmin")));
      }
      return;
    }
    if (job.verify == "heisenberg") {
      const TestFunction tf = family_member(sh.ctx, job.member);
      auto reps = heisenberg_sweep(*sh.heisenberg, sh.heisenberg_refined.get(), tf.f, job.ab);
      std::vector<double> base_ratios;
      for (auto& r : reps) {
        base_ratios.push_back(r.ratio_paper);
        label(r, job);
        out.add(std::move(r), false);
      }
      for (double dil : c.r) {
        auto dreps = heisenberg_sweep(*sh.heisenberg, nullptr, dilate_normalized(sh.ctx, dil, tf.f), job.ab);
        for (std::size_t i = 0; i < dreps.size(); ++i) {
          std::ostringstream sub;
          sub << subject << " a=" << job.ab[i].first << " b=" << job.ab[i].second << " r=" << dil;
          out.checks.push_back(check_le("heisenberg_dilation", sub.str(),
                                        std::fabs(dreps[i].ratio_paper / base_ratios[i] - 1.0),
                                        c.tolerance("dilation")));
        }
      }
      return;
    }
    const TestFunction tf = job_function(sh, job);
    const VerifyGrids& grids = grids_for(sh, tf);
    InequalityReport rep;
    bool strict = false;
    if (job.verify == "interpolation") {
      rep = interpolation_check(grids, tf.f, job.s);
    } else if (job.verify == "local-small") {
      rep = local_small_s(grids, tf.f, job.set, job.s);
      strict = true;
    } else if (job.verify == "local-large") {
      rep = local_large_s(grids, tf.f, job.set, job.s);
      strict = true;
    } else if (job.verify == "local-critical") {
      rep = local_critical(grids, tf.f, job.set);
      strict = true;
    } else {
      rep = lemma512_ratio(grids, tf.f, job.s);
      if (job.verify == "lemma-extremal") {
        out.checks.push_back(check_le("cs_equality_oracle", subject,
                                      std::fabs(rep.values.at("cs_ratio_oracle") - 1.0),
                                      c.tolerance("lemma_equality")));
        out.checks.push_back(check_le("ratio_oracle_equality", subject, std::fabs(*rep.ratio_oracle - 1.0),
                                      c.tolerance("lemma_equality")));
      }
      for (double dil : c.r) {
        InequalityReport drep = lemma512_ratio(grids, dilate_normalized(sh.ctx, dil, tf.f), job.s);
        std::ostringstream sub;
        sub << subject << " r=" << dil;
        out.checks.push_back(check_le("lemma_dilation", sub.str(),
                                      std::fabs(drep.deciding_ratio() / rep.deciding_ratio() - 1.0),
                                      c.tolerance("dilation")));
      }
    }
    label(rep, job);
    out.add(std::move(rep), strict);
  });
  return out;
}

Shared make_shared_state(const RunConfig& c, const std::vector<Job>& jobs) {
  Shared sh;
  sh.config = &c;
  sh.ctx = AlphaContext(c.alpha);
  const bool refine_grids = c.refine.value_or(true);
  sh.fast.space = build_space_grid(sh.ctx, c.grid.space);
  sh.fast.norm = c.grid.spectral.norm;
  if (refine_grids) sh.fast.refined = build_space_grid(sh.ctx, refine(c.grid.space));
  sh.slow.space = build_space_grid(sh.ctx, c.grid.graded);
  sh.slow.norm = c.grid.spectral.norm;
  if (refine_grids) sh.slow.refined = build_space_grid(sh.ctx, refine(c.grid.graded));
  bool heisenberg = false;
  for (const auto& j : jobs) heisenberg = heisenberg || j.verify == "heisenberg";
  if (heisenberg) {
    // The heisenberg preset grids unless the user chose a preset.
    RunConfig tmp = c;
    tmp.verify = "heisenberg";
    resolve_for_command(tmp, "verify");
    const GridConfig& g = tmp.grid;
    sh.heisenberg = plan(build_space_grid(sh.ctx, g.space), build_spectral_grid(sh.ctx, g.spectral));
    if (c.refine.value_or(false)) {
      sh.heisenberg_refined =
          plan(build_space_grid(sh.ctx, refine(g.space)), build_spectral_grid(sh.ctx, refine(g.spectral)));
    }
  }
  return sh;
}

std::vector<Outcome> run_jobs(const Shared& sh, const std::vector<Job>& jobs, int threads) {
  std::vector<Outcome> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) results[i] = run_job(sh, jobs[i]);
  };
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return results;
}

std::string ab_key(double a, double b) {
  std::ostringstream key;
  key << "a=" << a << ",b=" << b;
  return key.str();
}

void check_baseline(const RunConfig& c, const std::vector<Outcome>& results, Document& doc) {
  std::map<std::string, double> minima;
  for (const auto& o : results) {
    for (const auto& r : o.reports) {
      if (r.name != "heisenberg") continue;
      const std::string key = ab_key(r.params.at("a"), r.params.at("b"));
      const auto it = minima.find(key);
      minima[key] = it == minima.end() ? r.ratio_paper : std::min(it->second, r.ratio_paper);
    }
  }
  if (minima.empty()) return;
  doc.values()["heisenberg_minimum_ratio"] = minima;
  if (c.baseline.empty()) return;
  std::ifstream in(c.baseline);
  if (!in) throw ConfigError("cannot read baseline file \"" + c.baseline + "\"");
  json base;
  try {
    base = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("baseline file \"" + c.baseline + "\" is not valid JSON");
  }
  if (!base.contains("ratios")) throw ConfigError("baseline file has no \"ratios\" object");
  const double factor = c.tolerance("baseline_factor");
  for (const auto& [key, value] : minima) {
    if (!base["ratios"].contains(key)) continue;
    const double b = base["ratios"][key].get<double>();
    doc.add(check_ge("heisenberg_baseline", key, value, factor * b));
  }
}

std::vector<std::pair<double, double>> ab_pairs(const RunConfig& c) {
  const std::vector<double> as = c.sweep.a.empty() ? std::vector<double>{c.a} : c.sweep.a;
  const std::vector<double> bs = c.sweep.b.empty() ? std::vector<double>{c.b} : c.sweep.b;
  std::vector<std::pair<double, double>> out;
  for (double a : as) {
    for (double b : bs) out.emplace_back(a, b);
  }
  return out;
}

bool s_valid(const std::string& verify, double s, double d) {
  if (verify == "local-small" || verify == "profile") return s > 0.0 && s < d;
  if (verify == "interpolation") return s > 1.0;
  if (verify == "local-critical" || verify == "heisenberg") return true;
  return s > d;
}

RunResult run_verification(const RunConfig& c, const std::string& command,
                           const std::vector<std::string>& names, const std::vector<double>& s_values,
                           const std::vector<SpectralSet>& sets) {
  const double d = 3.0 * c.alpha + 2.0;
  std::vector<Job> jobs;
  for (const auto& v : names) {
    std::vector<double> ss;
    if (v == "local-critical" || v == "heisenberg") {
      ss = {v == "local-critical" ? d : 0.0};
    } else if (s_values.empty()) {
      ss = {default_s(v, d)};
    } else {
      for (double s : s_values) {
        if (s_valid(v, s, d)) ss.push_back(s);
      }
    }
    const bool uses_set = v == "local-small" || v == "local-large" || v == "local-critical" || v == "profile";
    const std::vector<SpectralSet> vsets = uses_set ? sets : std::vector<SpectralSet>{sets.front()};
    for (const auto& member : family_or(c, default_members(v))) {
      const std::string m = v == "lemma-extremal" ? "extremal" : (v == "profile" ? "none" : member);
      for (double s : ss) {
        for (const auto& set : vsets) {
          jobs.push_back({v, m, s, set, v == "heisenberg" ? ab_pairs(c) : std::vector<std::pair<double, double>>{}});
        }
      }
      if (v == "lemma-extremal" || v == "profile") break;
    }
  }
  const Shared sh = make_shared_state(c, jobs);
  const int threads = command == "sweep" ? thread_count() : 1;
  const std::vector<Outcome> results = run_jobs(sh, jobs, threads);
  Document doc(c, command);
  for (const auto& o : results) doc.add(o);
  check_baseline(c, results, doc);
  if (sh.heisenberg) {
    doc.values()["heisenberg_grid"] = {{"space", sh.heisenberg->space_grid()->id()},
                                       {"spectral", sh.heisenberg->spectral_grid()->id()}};
  }
  return doc.finish();
}

RunResult run_verify(const RunConfig& c) {
  if (c.verify.empty()) {
    std::string names;
    for (const auto& n : verify_names()) names += (names.empty() ? "" : ", ") + n;
    throw ConfigError("verify needs a verification name; valid names: " + names);
  }
  std::vector<double> s;
  if (c.s) s.push_back(*c.s);
  return run_verification(c, "verify", {c.verify}, s, {c.set});
}

RunResult run_sweep(const RunConfig& c) {
  std::vector<std::string> names = c.sweep.verify;
  if (names.empty()) names = {"local-small", "local-large", "local-critical", "lemma"};
  std::vector<SpectralSet> sets = c.sweep.sets;
  if (sets.empty()) sets.push_back(c.set);
  return run_verification(c, "sweep", names, c.sweep.s, sets);
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"specfun", "transform", "plancherel", "convolve", "young",
                                                 "heat",    "constants", "verify",     "sweep"};
  return names;
}

RunResult run(RunConfig config, const std::string& command) {
  resolve_for_command(config, command);
  if (command == "specfun") return run_specfun(config);
  if (command == "transform") return run_transform(config);
  if (command == "plancherel") return run_plancherel(config);
  if (command == "convolve") return run_convolve(config);
  if (command == "young") return run_young(config);
  if (command == "heat") return run_heat(config);
  if (command == "constants") return run_constants(config);
  if (command == "verify") return run_verify(config);
  if (command == "sweep") return run_sweep(config);
  throw ConfigError("unknown command \"" + command + "\"");
}

bool write_output(const RunConfig& config, const json& document) {
  const std::string body =
      config.output_format == "csv" ? reports_to_csv(document) : document.dump(2) + "\n";
  if (config.output_path.empty()) {
    std::cout << body;
    return static_cast<bool>(std::cout);
  }
  std::ofstream out(config.output_path, std::ios::binary);
  if (!out) return false;
  out << body;
  out.close();
  return static_cast<bool>(out);
}

}  // namespace lbharm::cli
