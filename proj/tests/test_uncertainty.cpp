#include "doctest.h"

#include <cmath>
#include <numbers>

#include "lbharm/quadrature.hpp"
#include "lbharm/test_family.hpp"
#include "lbharm/uncertainty.hpp"

using namespace lbharm;

namespace {

constexpr double kPi = std::numbers::pi;

VerifyGrids fast_grids(double alpha) {
  const AlphaContext ctx(alpha);
  VerifyGrids g;
  g.space = build_space_grid(ctx, SpaceGridSpec{});
  return g;
}

VerifyGrids graded_grids(double alpha) {
  SpaceGridSpec spec;
  spec.graded = true;
  spec.x_max = spec.t_max = 400.0;
  VerifyGrids g;
  g.space = build_space_grid(AlphaContext(alpha), spec);
  return g;
}

}  // namespace

TEST_CASE("constants at alpha = 0") {
  const AlphaContext ctx(0.0);
  CHECK(beta_block(ctx, ConstantVariant::paper) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(beta_block(ctx, ConstantVariant::oracle) == doctest::Approx(0.125).epsilon(1e-9));
  CHECK(constant_K(ctx, 1.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  const ConstantN n = constant_N(ctx, 4.0);
  CHECK(n.paper == doctest::Approx(kPi / 16.0).epsilon(1e-14));
  CHECK(n.oracle == doctest::Approx(kPi / 32.0).epsilon(1e-9));
  CHECK(constant_M(ctx, 4.0, false) == doctest::Approx(constant_M_displayed(ctx, 4.0)).epsilon(1e-13));
  CHECK(constant_C_critical(ctx) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(constant_C_composed(ctx, ConstantVariant::paper) == doctest::Approx(constant_C_critical(ctx)).epsilon(1e-14));
}

TEST_CASE("constants for alpha > 0") {
  for (double alpha : {0.5, 1.0, 2.0}) {
    const AlphaContext ctx(alpha);
    const double d = ctx.half_dimension();
    for (double s : {d + 0.5, 2.0 * d}) {
      CHECK(constant_M(ctx, s, false) == doctest::Approx(constant_M_displayed(ctx, s)).epsilon(1e-13));
      CHECK(constant_N(ctx, s).oracle / constant_N(ctx, s).paper == doctest::Approx(0.5).epsilon(1e-8));
    }
    CHECK(constant_C_composed(ctx, ConstantVariant::paper) < constant_C_critical(ctx));
  }
}

TEST_CASE("constant preconditions") {
  const AlphaContext ctx(0.0);
  CHECK_THROWS_AS(constant_K(ctx, 2.0), DomainError);
  CHECK_THROWS_AS(constant_K(ctx, 0.0), DomainError);
  CHECK_THROWS_AS(constant_N(ctx, 2.0), DivergenceError);
  CHECK_THROWS_AS(constant_M(ctx, 1.5, false), DivergenceError);
}

TEST_CASE("bound profile") {
  const AlphaContext ctx(0.5);
  const double d = ctx.half_dimension();
  const double gamma_e = gamma_measure_of_set(ctx, {0.0, 1.0, {0, 1, 2}});
  for (double s : {0.5, 1.5, 3.0}) {
    const double r0 = bound_profile_argmin(ctx, s, gamma_e);
    CHECK(bound_profile(ctx, s, gamma_e, r0) ==
          doctest::Approx(constant_K(ctx, s) * std::pow(gamma_e, s / (2.0 * d))).epsilon(1e-12));
    const double found = golden_section_minimize([&](double r) { return bound_profile(ctx, s, gamma_e, r); },
                                                 r0 / 10.0, 10.0 * r0, 1e-12);
    CHECK(found == doctest::Approx(r0).epsilon(1e-6));
  }
  CHECK_THROWS_AS(bound_profile(ctx, 1.0, gamma_e, 0.0), DomainError);
  CHECK_THROWS_AS(bound_profile_argmin(ctx, 1.0, -1.0), DomainError);
}

TEST_CASE("test family") {
  const AlphaContext ctx(0.0);
  const auto names = family_names();
  CHECK(names.size() == 7);
  CHECK(family_member(ctx, "gauss").f(1.0, 0.5) == doctest::Approx(std::exp(-1.25)));
  CHECK(family_member(ctx, "extremal", 4.0).f(1.0, 0.0) == doctest::Approx(0.5));
  CHECK(family_member(ctx, "extremal").slow_decay);
  CHECK_FALSE(family_member(ctx, "gauss-aniso").slow_decay);
  CHECK(extremal_function(2.0, 2.0, 3.0)(0.0, 0.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(family_member(ctx, "nope"), ConfigError);
  CHECK_THROWS_AS(extremal_function(0.0), DomainError);
}

TEST_CASE("L^1 moment inequality is sharp for the extremal function") {
  const AlphaContext ctx(0.0);
  const InequalityReport rep = lemma512_ratio(graded_grids(0.0), extremal_function(4.0), 4.0);
  REQUIRE(rep.ratio_oracle.has_value());
  CHECK(*rep.ratio_oracle == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(rep.values.at("cs_ratio_oracle") == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(rep.ratio_paper == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-4));
  const InequalityReport pert =
      lemma512_ratio(graded_grids(0.0), family_member(ctx, "extremal-perturbed", 4.0).f, 4.0);
  CHECK(pert.deciding_ratio() < 1.0 - 1e-3);
}

TEST_CASE("local inequalities on a gaussian") {
  const AlphaContext ctx(0.0);
  const SpaceFunction f = family_member(ctx, "gauss").f;
  const SpectralSet e{0.0, 1.0, {0, 1, 2, 3, 4}};
  const VerifyGrids g = fast_grids(0.0);
  const InequalityReport small = local_small_s(g, f, e, 1.0);
  CHECK(small.satisfied());
  CHECK(small.strict);
  CHECK(small.rhs_oracle.has_value());
  CHECK(local_large_s(g, f, e, 4.0).strict);
  CHECK(local_critical(g, f, e).strict);
  CHECK(interpolation_check(g, f, 2.0).satisfied());
  CHECK_THROWS_AS(local_small_s(g, f, e, 2.0), DomainError);
  CHECK_THROWS_AS(local_large_s(g, f, e, 2.0), DivergenceError);
  CHECK_THROWS_AS(interpolation_check(g, f, 1.0), DomainError);
  const SpaceFunction zero = [](double, double) { return 0.0; };
  CHECK_THROWS_AS(local_small_s(g, zero, e, 1.0), UndefinedRatioError);
}

TEST_CASE("heisenberg ratio is bounded below and dilation invariant") {
  const AlphaContext ctx(0.0);
  const auto p = plan(build_space_grid(ctx, SpaceGridSpec{}), build_spectral_grid(ctx, SpectralGridSpec{}));
  const SpaceFunction f = family_member(ctx, "gauss").f;
  const auto reps = heisenberg_sweep(*p, nullptr, f, {{1.0, 1.0}, {2.0, 0.5}});
  REQUIRE(reps.size() == 2);
  CHECK(reps[0].ratio_paper == doctest::Approx(1.47858).epsilon(1e-4));
  const auto dil = heisenberg_sweep(*p, nullptr, dilate_normalized(ctx, 1.3, f), {{1.0, 1.0}});
  CHECK(dil[0].ratio_paper == doctest::Approx(reps[0].ratio_paper).epsilon(1e-3));
  CHECK_THROWS_AS(heisenberg_ratio(*p, nullptr, f, 0.0, 1.0), DomainError);
}

TEST_CASE("report logic") {
  InequalityReport r;
  r.kind = InequalityReport::Kind::upper;
  r.lhs = 0.9;
  r.rhs_paper = 1.0;
  r.rhs_oracle = 0.95;
  r.finalize();
  CHECK(r.deciding_ratio() == doctest::Approx(0.9 / 0.95));
  CHECK(r.satisfied());
  r.lhs = 0.96;
  r.grid_error_estimate = 0.0;
  r.finalize();
  CHECK_FALSE(r.satisfied());
  CHECK(to_string(InequalityReport::Kind::lower) == "lower");
}
