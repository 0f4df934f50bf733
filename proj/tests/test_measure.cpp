#include "doctest.h"

#include <cmath>
#include <numbers>

#include "lbharm/measure.hpp"
#include "lbharm/quadrature.hpp"

using namespace lbharm;

constexpr double kPi = std::numbers::pi;

TEST_CASE("gauss-legendre rules") {
  const QuadratureRule r = gauss_legendre(10);
  CHECK(r.weights.sum() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(r.apply([](double x) { return std::pow(x, 18); }) == doctest::Approx(2.0 / 19.0).epsilon(1e-14));
  const QuadratureRule c = composite_gauss_legendre(0.0, kPi, 4, 12);
  CHECK(c.apply([](double x) { return std::sin(x); }) == doctest::Approx(2.0).epsilon(1e-14));
  const auto edges = geometric_edges(0.25, 1.2, 10.0);
  CHECK(edges.front() == 0.0);
  CHECK(edges.back() == doctest::Approx(10.0));
  CHECK_THROWS_AS(gauss_legendre(0), ConfigError);
  CHECK_THROWS_AS(composite_gauss_legendre(1.0, 1.0, 2, 4), ConfigError);
}

TEST_CASE("tanh-sinh and golden section") {
  CHECK(tanh_sinh([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(tanh_sinh([](double x) { return std::log(x); }, 0.0, 1.0) == doctest::Approx(-1.0).epsilon(1e-10));
  const double m = golden_section_minimize([](double x) { return (x - 1.7) * (x - 1.7) + 3.0; }, 0.0, 5.0);
  CHECK(m == doctest::Approx(1.7).epsilon(1e-8));
}

TEST_CASE("homogeneous norm and dilations") {
  CHECK(homogeneous_norm(1.0, 0.0) == doctest::Approx(1.0));
  CHECK(homogeneous_norm(0.0, 0.5) == doctest::Approx(1.0));
  const SpacePoint p{0.7, 1.3};
  const double r = 2.5;
  CHECK(homogeneous_norm(dilate(r, p)) == doctest::Approx(r * homogeneous_norm(p)).epsilon(1e-15));
  CHECK_THROWS_AS(dilate(0.0, p), DomainError);
}

TEST_CASE("space grid integrates the gaussian") {
  // int exp(-(x^2+t^2)) dm_0 = 1 / (4 sqrt(pi)).
  const AlphaContext ctx(0.0);
  const auto grid = build_space_grid(ctx, SpaceGridSpec{});
  const auto f = SampledFunction::sample(grid, [](double x, double t) { return std::exp(-(x * x + t * t)); });
  CHECK(integrate_space(f) == doctest::Approx(1.0 / (4.0 * std::sqrt(kPi))).epsilon(1e-13));
  // ||f||_2^2 = int exp(-2(x^2+t^2)) dm_0 = 1 / (8 sqrt(2 pi)).
  CHECK(std::pow(lp_norm_space(f, 2.0), 2) == doctest::Approx(1.0 / (8.0 * std::sqrt(2.0 * kPi))).epsilon(1e-13));
  CHECK(inner_product_space(f, f) == doctest::Approx(std::pow(lp_norm_space(f, 2.0), 2)).epsilon(1e-14));
  CHECK_THROWS_AS(lp_norm_space(f, 0.5), DomainError);
}

TEST_CASE("normalized dilation") {
  // m_alpha(delta_r E) = r^{6 alpha + 4} m_alpha(E), so f_r keeps the L^1 norm.
  const AlphaContext ctx(0.5);
  const auto grid = build_space_grid(ctx, SpaceGridSpec{});
  const SpaceFunction g = [](double x, double t) { return std::exp(-(x * x + t * t)); };
  const double n = lp_norm_space(SampledFunction::sample(grid, g), 1.0);
  for (double r : {0.7, 1.4}) {
    const double nr = lp_norm_space(SampledFunction::sample(grid, dilate_normalized(ctx, r, g)), 1.0);
    CHECK(nr == doctest::Approx(n).epsilon(1e-9));
  }
}

TEST_CASE("graded grid reaches far out") {
  SpaceGridSpec spec;
  spec.graded = true;
  spec.x_max = spec.t_max = 400.0;
  const auto grid = build_space_grid(AlphaContext(0.0), spec);
  CHECK(grid->x_nodes().maxCoeff() < 400.0);
  CHECK(grid->x_nodes().maxCoeff() > 390.0);
  CHECK(grid->inscribed_radius() == doctest::Approx(std::sqrt(800.0)));
  CHECK_THROWS_AS(build_space_grid(AlphaContext(0.0), 0.0, 1.0, 1, 1, 4), ConfigError);
}

TEST_CASE("gamma normalization") {
  const AlphaContext c0(0.0);
  CHECK(gamma_prefactor(c0, GammaNorm::plancherel) == doctest::Approx(4.0));
  CHECK(gamma_prefactor(c0, GammaNorm::paper) == doctest::Approx(2.0 / std::sqrt(kPi)));
  CHECK(parse_gamma_norm("paper") == GammaNorm::paper);
  CHECK(to_string(GammaNorm::plancherel) == "plancherel");
  CHECK_THROWS_AS(parse_gamma_norm("other"), ConfigError);
}

TEST_CASE("laguerre tail sum") {
  // At alpha = 0 the sum is sum_{m >= k} (2m+1)^{-2}.
  double direct = 0.0;
  for (int m = 3; m < 2000000; ++m) direct += 1.0 / ((2.0 * m + 1.0) * (2.0 * m + 1.0));
  CHECK(laguerre_tail_sum(0.0, 3) == doctest::Approx(direct).epsilon(1e-6));
  CHECK(laguerre_tail_sum(0.0, 0) == doctest::Approx(kPi * kPi / 8.0).epsilon(1e-10));
}

TEST_CASE("spectral grid and gamma of a set") {
  const AlphaContext ctx(0.0);
  const auto grid = build_spectral_grid(ctx, SpectralGridSpec{});
  CHECK(grid->size() > 0);
  CHECK((grid->weights().array() > 0.0).all());
  // gamma_0([0,1] x {0}) = c int_0^1 lambda dlambda = c / 2.
  const SpectralSet e{0.0, 1.0, {0}};
  CHECK(gamma_measure_of_set(ctx, e, GammaNorm::plancherel) == doctest::Approx(2.0).epsilon(1e-13));
  const SpectralSet e5{0.0, 1.0, {0, 1, 2, 3, 4}};
  CHECK(gamma_measure_of_set(ctx, e5, GammaNorm::paper) ==
        doctest::Approx(5.0 / std::sqrt(kPi)).epsilon(1e-13));
  const auto sg = build_set_grid(ctx, e5, GammaNorm::plancherel);
  const SpectralFunction one(sg, Eigen::VectorXd::Ones(sg->size()));
  CHECK(integrate_spectral(one) == doctest::Approx(gamma_measure_of_set(ctx, e5, GammaNorm::plancherel)));
  CHECK_THROWS_AS((SpectralSet{1.0, 0.5, {0}}).validate(), DomainError);
  CHECK_THROWS_AS((SpectralSet{0.0, 1.0, {}}).validate(), DomainError);
}

TEST_CASE("ball moment") {
  const AlphaContext c0(0.0);
  for (double a : {0.0, 0.5, 1.0}) {
    for (double r : {0.5, 1.0, 2.0}) {
      const BallMoment b = ball_moment(c0, a, r);
      CHECK(b.oracle == doctest::Approx(std::pow(r, 4.0 - 2.0 * a) / (8.0 * (2.0 - a))).epsilon(1e-8));
      CHECK(b.ratio() == doctest::Approx(0.5).epsilon(1e-8));
    }
  }
  CHECK_THROWS_AS(ball_moment(c0, 2.0, 1.0), DivergenceError);
  CHECK_THROWS_AS(ball_moment(c0, 0.0, -1.0), DomainError);
}

TEST_CASE("radial integral and tail moment") {
  const AlphaContext ctx(1.0);
  const double d = ctx.half_dimension();
  // m_alpha(B_r) = block r^{2d} / d, so the radial integral below is
  // block B(d, q/2 - d).
  const double q = 14.0;
  const double full = radial_integral(ctx, [q](double n) { return std::pow(1.0 + n * n, -q / 2.0); });
  const double block = d * ball_moment(ctx, 0.0, 1.0).oracle;
  CHECK(full == doctest::Approx(block * beta_fn(d, q / 2.0 - d)).epsilon(1e-9));
  CHECK(tail_moment(ctx, q, 2.0) * (q / 2.0 - d) / std::pow(2.0, 2.0 * d - q) ==
        doctest::Approx(0.5 * beta_block(ctx)).epsilon(1e-14));
  CHECK(0.5 * beta_block(ctx) == doctest::Approx(block).epsilon(1e-9));
  CHECK_THROWS_AS(tail_moment(ctx, 10.0, 1.0), DivergenceError);
}
