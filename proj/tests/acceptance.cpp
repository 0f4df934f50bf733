// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "commands.hpp"
#include "config.hpp"
#include "lbharm/heat.hpp"
#include "lbharm/quadrature.hpp"
#include "lbharm/specfun.hpp"
#include "lbharm/test_family.hpp"
#include "lbharm/uncertainty.hpp"
#include "report_io.hpp"

using namespace lbharm;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

struct Result {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& name, double budget_s, const std::function<void(Result&)>& body) {
  Result r;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail << "[exception: " << e.what() << "] ";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.require(secs < budget_s, "runtime budget " + std::to_string(budget_s) + " s");
  if (!r.pass) ++failures;
  std::printf("%s %2d. %-34s %6.1f s  %s\n", r.pass ? "PASS" : "FAIL", id, name.c_str(), secs, r.detail.str().c_str());
  std::fflush(stdout);
}

std::shared_ptr<const TransformPlan> make_plan(const AlphaContext& ctx, const SpaceGridSpec& s, const SpectralGridSpec& g) {
  return plan(build_space_grid(ctx, s), build_spectral_grid(ctx, g));
}

double gauss(double x, double t) { return std::exp(-(x * x + t * t)); }

double round_trip_error(const TransformPlan& p, const SampledFunction& f) {
  const SampledFunction back = inverse(p, forward(p, f));
  const Eigen::MatrixXd diff = back.values - f.values;
  return std::sqrt((diff.array().square() * p.space_grid()->weights().array()).sum()) / lp_norm_space(f, 2.0);
}

std::string run_tool(const std::string& args, int& code) {
  FILE* pipe = popen((std::string(LBHARM_TOOL) + " " + args + " 2>/dev/null").c_str(), "r");
  std::string out;
  if (!pipe) {
    code = -1;
    return out;
  }
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

}  // namespace

int main() {
  criterion(1, "special functions", 1.0, [](Result& r) {
    double cos_err = 0.0, sinc_err = 0.0;
    for (int k = 0; k < 100; ++k) {
      const double x = 20.0 * k / 99.0;
      cos_err = std::max(cos_err, std::fabs(bessel_normalized(-0.5, x) - std::cos(x)));
      sinc_err = std::max(sinc_err, std::fabs(bessel_normalized(0.5, x) - (x == 0.0 ? 1.0 : std::sin(x) / x)));
    }
    double rec = 0.0;
    for (double a : {0.0, 0.5, 1.0, 2.0}) {
      for (int m = 0; m <= 20; ++m) {
        for (int k = 0; k <= 80; ++k) {
          const double x = 0.25 * k;
          const double e = static_cast<double>(laguerre_poly_explicit(m, a, x));
          // Exact roots such as L_2^2(2) = 0 have no relative error.
          if (std::fabs(e) < 1e-12) continue;
          rec = std::max(rec, std::fabs(laguerre_poly(m, a, x) - e) / std::fabs(e));
        }
      }
    }
    r.detail << "cos " << cos_err << ", sinc " << sinc_err << ", recurrence " << rec;
    r.require(cos_err <= 1e-12 && sinc_err <= 1e-12, "bessel");
    r.require(rec <= 1e-10, "recurrence");
  });

  criterion(2, "generating function", 1.0, [](Result& r) {
    double worst = 0.0;
    const double sets[3][3] = {{0.0, 0.0, 3.0}, {0.0, 0.5, 1.0}, {1.0, 0.5, 1.0}};
    for (const auto& s : sets) {
      const auto [partial, closed] = generating_function_check(s[0], s[1], s[2], 80);
      worst = std::max(worst, std::fabs(partial - closed) / std::fabs(closed));
    }
    r.detail << "worst relative " << worst;
    r.require(worst <= 1e-10, "partial sums");
  });

  criterion(3, "eigenfunction PDE residuals", 10.0, [](Result& r) {
    double d1 = 0.0, d2 = 0.0;
    for (double alpha : {0.0, 1.0}) {
      const AlphaContext ctx(alpha);
      for (double lambda : {0.3, 0.7, 1.0, 1.6, 2.5}) {
        for (int m : {0, 1, 2, 4, 7}) {
          for (double x : {0.2, 1.3, 3.0}) {
            for (double t : {0.2, 1.1, 3.0}) {
              const PdeResidual p = eigenfunction_pde_residual(ctx, lambda, m, x, t);
              d1 = std::max(d1, p.d1 / (1e-5 * (1.0 + lambda * lambda)));
              d2 = std::max(d2, p.d2 / (1e-4 * (1.0 + eigenvalue_L(ctx, lambda, m))));
            }
          }
        }
      }
    }
    r.detail << "residual / tolerance: D1 " << d1 << ", D2 " << d2;
    r.require(d1 <= 1.0 && d2 <= 1.0, "residuals");
  });

  criterion(4, "plancherel", 60.0, [](Result& r) {
    for (double alpha : {0.0, 0.5, 1.0}) {
      const AlphaContext ctx(alpha);
      const SpaceGridSpec s;
      const SpectralGridSpec g;
      const auto p = make_plan(ctx, s, g);
      const auto fine = make_plan(ctx, cli::refine(s), cli::refine(g));
      const double d0 = plancherel_defect(*p, SampledFunction::sample(p->space_grid(), gauss));
      const double d1 = plancherel_defect(*fine, SampledFunction::sample(fine->space_grid(), gauss));
      r.detail << "a=" << alpha << ": " << d0 << " -> " << d1 << "  ";
      r.require(d0 <= 1e-3, "defect at alpha " + std::to_string(alpha));
      r.require(d1 < d0, "refinement at alpha " + std::to_string(alpha));
    }
  });

  criterion(5, "round trip", 120.0, [](Result& r) {
    for (double alpha : {0.0, 0.5, 1.0}) {
      const AlphaContext ctx(alpha);
      const auto space = build_space_grid(ctx, SpaceGridSpec{});
      const auto f = SampledFunction::sample(space, gauss);
      SpectralGridSpec g;
      double prev = INFINITY;
      r.detail << "a=" << alpha << ":";
      for (int level = 0; level < 3; ++level) {
        const double e = round_trip_error(*plan(space, build_spectral_grid(ctx, g)), f);
        r.detail << " " << e;
        if (level == 0) r.require(e <= 1e-2, "default error at alpha " + std::to_string(alpha));
        r.require(e < prev, "monotone at alpha " + std::to_string(alpha));
        prev = e;
        g = cli::refine(g);
      }
      r.detail << "  ";
    }
  });

  criterion(6, "heat semigroup", 120.0, [](Result& r) {
    const cli::GridConfig heat = cli::grid_preset("heat");
    double semigroup = 0.0, mass = 0.0, residual = 0.0, scaling = 0.0;
    for (double alpha : {0.0, 1.0}) {
      const AlphaContext ctx(alpha);
      const auto p = make_plan(ctx, heat.space, heat.spectral);
      const auto& grid = p->spectral_grid();
      const Eigen::VectorXd m12 = heat_multiplier(grid, 1.5).values;
      semigroup = std::max(semigroup, (heat_multiplier(grid, 0.5).values.cwiseProduct(heat_multiplier(grid, 1.0).values) - m12)
                                          .cwiseAbs()
                                          .maxCoeff());
      for (double s : {0.5, 1.0, 2.0}) {
        mass = std::max(mass, std::fabs(integrate_space(heat_kernel(*p, s)) - 1.0));
        residual = std::max(residual, heat_equation_residual(*p, s));
      }
      const double c1 = heat_l2_norm_sq(ctx, 1.0);
      for (double s : {0.25, 4.0}) {
        scaling = std::max(scaling, std::fabs(heat_l2_norm_sq(ctx, s) * std::pow(s, ctx.half_dimension()) / c1 - 1.0));
      }
    }
    const double value = heat_l2_norm_sq(AlphaContext(0.0), 1.0);
    const double expected = kPi * kPi / (64.0 * std::sqrt(kPi));
    r.detail << "semigroup " << semigroup << ", mass " << mass << ", scaling " << scaling << ", norm(a=0,s=1) "
             << value << ", pde " << residual;
    r.require(semigroup <= 1e-15, "semigroup");
    r.require(mass <= 1e-3, "mass");
    r.require(scaling <= 1e-12, "norm scaling");
    r.require(std::fabs(value - expected) <= 1e-8, "closed form value");
    r.require(residual <= 1e-2, "heat equation residual");
  });

  criterion(7, "ball moment", 60.0, [](Result& r) {
    double worst = 0.0;
    const AlphaContext c0(0.0);
    for (double a : {0.0, 0.5, 1.0}) {
      for (double rad : {0.5, 1.0, 2.0}) {
        const double exact = std::pow(rad, 4.0 - 2.0 * a) / (8.0 * (2.0 - a));
        worst = std::max(worst, std::fabs(ball_moment(c0, a, rad).oracle / exact - 1.0));
      }
    }
    double slope_err = 0.0, ratio_spread = 0.0;
    for (double alpha : {0.0, 0.5, 1.0}) {
      const AlphaContext ctx(alpha);
      for (double a : {0.0, 0.5, 1.0}) {
        const std::vector<double> radii{0.5, 1.0, 2.0};
        double sx = 0, sy = 0, sxx = 0, sxy = 0, rmin = INFINITY, rmax = -INFINITY;
        for (double rad : radii) {
          const BallMoment b = ball_moment(ctx, a, rad);
          const double lx = std::log(rad), ly = std::log(b.oracle);
          sx += lx;
          sy += ly;
          sxx += lx * lx;
          sxy += lx * ly;
          rmin = std::min(rmin, b.ratio());
          rmax = std::max(rmax, b.ratio());
        }
        const double n = static_cast<double>(radii.size());
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        if (alpha > 0.0) slope_err = std::max(slope_err, std::fabs(slope - (6.0 * alpha + 4.0 - 2.0 * a)));
        ratio_spread = std::max(ratio_spread, (rmax - rmin) / rmin);
      }
    }
    r.detail << "alpha=0 closed form " << worst << ", slope " << slope_err << ", ratio spread " << ratio_spread
             << ", oracle/paper at alpha=0 " << ball_moment(c0, 0.0, 1.0).ratio();
    r.require(worst <= 1e-8, "closed form");
    r.require(slope_err <= 1e-6, "scaling exponent");
    r.require(ratio_spread <= 1e-8, "ratio independent of r");
  });

  criterion(8, "L1 moment inequality sharpness", 120.0, [](Result& r) {
    const AlphaContext ctx(0.0);
    VerifyGrids g;
    g.space = build_space_grid(ctx, cli::grid_preset("graded").graded);
    const InequalityReport ext = lemma512_ratio(g, extremal_function(4.0), 4.0);
    const double cs = ext.values.at("cs_ratio_oracle");
    const double n_oracle = constant_N(ctx, 4.0).oracle;
    const InequalityReport pert = lemma512_ratio(g, family_member(ctx, "extremal-perturbed", 4.0).f, 4.0);
    double dil = 0.0;
    for (double rr : {0.5, 2.0}) {
      const InequalityReport d = lemma512_ratio(g, dilate_normalized(ctx, rr, extremal_function(4.0)), 4.0);
      dil = std::max(dil, std::fabs(d.deciding_ratio() / ext.deciding_ratio() - 1.0));
    }
    r.detail << "CS oracle ratio " << cs << ", N_oracle*32/pi " << n_oracle * 32.0 / kPi << ", ratio oracle "
             << *ext.ratio_oracle << " paper " << ext.ratio_paper << ", perturbed " << pert.deciding_ratio()
             << ", dilation " << dil;
    r.require(std::fabs(cs - 1.0) <= 1e-4, "Cauchy-Schwarz equality");
    r.require(std::fabs(n_oracle / (kPi / 32.0) - 1.0) <= 1e-4, "N oracle");
    r.require(pert.deciding_ratio() < 1.0 - 1e-3, "perturbed ratio");
    r.require(dil <= 1e-3, "dilation invariance");
  });

  criterion(9, "local uncertainty strictness", 300.0, [](Result& r) {
    cli::RunConfig c = cli::parse_config(json{{"alpha", 0.0}});
    c.sweep.verify = {"local-small", "local-large", "local-critical"};
    c.sweep.s = {1.0, 4.0};
    const cli::RunResult res = cli::run(c, "sweep");
    double worst = 0.0, worst_err = 0.0;
    int n = 0;
    for (const auto& rep : res.document["reports"]) {
      ++n;
      worst = std::max(worst, std::max(rep["ratio_paper"].get<double>(), rep["ratio_oracle"].get<double>()));
      worst_err = std::max(worst_err, rep["grid_error_estimate"].get<double>());
      r.require(rep["strict"].get<bool>(), rep["name"].get<std::string>() + " " + rep["params"]["function"].get<std::string>());
    }
    r.detail << n << " reports, largest ratio " << worst << ", largest grid error " << worst_err;
    r.require(n == 21, "report count");
    r.require(res.exit_code == 0, "sweep exit code");
  });

  criterion(10, "profile identity", 10.0, [](Result& r) {
    double ident = 0.0, argmin = 0.0;
    for (double alpha : {0.0, 0.5, 1.0}) {
      const AlphaContext ctx(alpha);
      const double d = ctx.half_dimension();
      const double ge = gamma_measure_of_set(ctx, {0.0, 1.0, {0, 1, 2, 3, 4}});
      for (double s : {0.25 * d, 0.5 * d, 0.9 * d}) {
        const double r0 = bound_profile_argmin(ctx, s, ge);
        const double expect = constant_K(ctx, s) * std::pow(ge, s / (2.0 * d));
        ident = std::max(ident, std::fabs(bound_profile(ctx, s, ge, r0) / expect - 1.0));
        const double found = golden_section_minimize([&](double x) { return bound_profile(ctx, s, ge, x); }, r0 / 10.0,
                                                     10.0 * r0, 1e-12);
        argmin = std::max(argmin, std::fabs(found / r0 - 1.0));
      }
    }
    r.detail << "identity " << ident << ", argmin " << argmin;
    r.require(ident <= 1e-12, "identity");
    r.require(argmin <= 1e-6, "argmin");
  });

  criterion(11, "heisenberg", 180.0, [](Result& r) {
    const std::string baseline = LBHARM_BASELINE;
    const json sweep = {{"a", {0.5, 1.0, 2.0}}, {"b", {0.5, 1.0, 2.0}}};
    cli::RunConfig fam = cli::parse_config(json{{"verify", "heisenberg"}, {"sweep", sweep}});
    const bool have_baseline = std::filesystem::exists(baseline);
    if (have_baseline) fam.baseline = baseline;
    const cli::RunResult res = cli::run(fam, "verify");
    const json& minima = res.document["values"]["heisenberg_minimum_ratio"];
    int honored = 0;
    for (const auto& chk : res.document["checks"]) {
      if (chk["name"] != "heisenberg_baseline") continue;
      ++honored;
      r.require(chk["passed"].get<bool>(), "baseline " + chk["subject"].get<std::string>());
    }
    if (!have_baseline) {
      std::ofstream out(baseline);
      out << json{{"test_family_version", kTestFamilyVersion},
                  {"grid", res.document["values"]["heisenberg_grid"]},
                  {"ratios", minima}}
                 .dump(2)
          << "\n";
      r.detail << "baseline recorded; ";
    } else {
      r.detail << honored << " baseline pairs honored; ";
      r.require(honored == 9, "baseline pair count");
    }
    cli::RunConfig gauss_cfg =
        cli::parse_config(json{{"verify", "heisenberg"}, {"sweep", sweep}, {"test_family", {"gauss"}}, {"r", {0.5, 2.0}}});
    const cli::RunResult dil = cli::run(gauss_cfg, "verify");
    double worst = 0.0;
    for (const auto& chk : dil.document["checks"]) {
      if (chk["name"] != "heisenberg_dilation") continue;
      worst = std::max(worst, chk["value"].get<double>());
      r.require(chk["passed"].get<bool>(), "dilation " + chk["subject"].get<std::string>());
    }
    r.detail << "minimum ratio " << minima["a=0.5,b=0.5"].get<double>() << " at (0.5,0.5), dilation " << worst;
    r.require(res.exit_code == 0 && dil.exit_code == 0, "exit codes");
  });

  criterion(12, "young inequality", 120.0, [](Result& r) {
    const AlphaContext ctx(0.0);
    const cli::RunConfig c = cli::parse_config(json::object());
    const auto& cv = c.convolution;
    ConvolutionSetup direct;
    direct.direct = true;
    direct.output = build_space_grid(ctx, cv.output_max, cv.output_max, cv.output_panels, cv.output_panels, cv.output_nodes);
    direct.integration = build_space_grid(ctx, cv.integration_max, cv.integration_max, cv.integration_panels,
                                          cv.integration_panels, cv.integration_nodes);
    direct.n_theta = cv.n_theta;
    ConvolutionSetup spectral;
    const auto sg = build_spectral_grid(ctx, SpectralGridSpec{});
    spectral.analysis = plan(build_space_grid(ctx, SpaceGridSpec{}), sg);
    spectral.synthesis = plan(direct.output, sg);
    const double pairs[5][2] = {{1.0, 1.0}, {1.0, 0.5}, {0.7, 1.3}, {2.0, 1.0}, {1.5, 0.8}};
    double worst = 0.0, agree = 0.0;
    for (const auto& ab : pairs) {
      const double a = ab[0], b = ab[1];
      const SpaceFunction f = [a](double x, double t) { return std::exp(-a * (x * x + t * t)); };
      const SpaceFunction g = [b](double x, double t) { return std::exp(-b * (x * x + 2.0 * t * t)); };
      for (const auto& rep : young_checks(direct, spectral, f, g, {{1, 1, 1}, {1, 2, 2}})) {
        worst = std::max(worst, rep.ratio_paper);
        r.require(rep.ratio_paper <= 1.0, "ratio for pair " + std::to_string(a) + "," + std::to_string(b));
      }
      const SampledFunction d = direct.convolve(f, g);
      const SampledFunction s = spectral.convolve(f, g);
      const Eigen::MatrixXd diff = d.values - s.values;
      agree = std::max(agree, std::sqrt((diff.array().square() * d.grid->weights().array()).sum()) /
                                  lp_norm_space(d, 2.0));
    }
    r.detail << "largest ratio " << std::setprecision(12) << worst << std::setprecision(6) << ", direct vs spectral " << agree;
    r.require(agree <= 1e-2, "direct vs spectral");
  });

  criterion(13, "CLI determinism", 60.0, [](Result& r) {
    for (const std::string args : {"verify local-small --test-family gauss extremal", "constants --s 4", "young"}) {
      int c1 = 0, c2 = 0;
      const std::string a = run_tool(args, c1);
      const std::string b = run_tool(args, c2);
      const bool same = c1 == c2 && c1 <= 1 &&
                        cli::strip_runtime(json::parse(a)).dump() == cli::strip_runtime(json::parse(b)).dump();
      r.require(same, args);
    }
    r.detail << "3 commands run twice";
  });

  std::printf("%d of 13 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
