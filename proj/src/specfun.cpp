#include "lbharm/specfun.hpp"

#include <cmath>

namespace lbharm {

AlphaContext::AlphaContext(double alpha) : alpha_(alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw DomainError("AlphaContext: alpha must be a finite nonnegative number");
  }
  gamma_alpha_plus_1_ = std::tgamma(alpha + 1.0);
  gamma_alpha_plus_half_ = std::tgamma(alpha + 0.5);
}

std::pair<double, double> generating_function_check(double alpha, double t, double x,
                                                    int m_max) {
  if (!(std::fabs(t) < 1.0)) throw DomainError("generating_function_check: requires |t| < 1");
  if (alpha < 0.0) throw DomainError("generating_function_check: alpha must be nonnegative");
  if (m_max < 0) throw DomainError("generating_function_check: m_max must be nonnegative");

  // Same recurrence as laguerre_poly, accumulated on the fly.
  double prev = 1.0;
  double sum = 1.0;
  double power = 1.0;
  double cur = 1.0 + alpha - x;
  for (int m = 1; m <= m_max; ++m) {
    power *= t;
    sum += power * cur;
    const double next = ((2.0 * m + 1.0 + alpha - x) * cur - (m + alpha) * prev) / (m + 1.0);
    prev = cur;
    cur = next;
  }
  const double closed = std::pow(1.0 - t, -alpha - 1.0) * std::exp(-x * t / (1.0 - t));
  return {sum, closed};
}

double eigenfunction(const AlphaContext& ctx, double lambda, int m, double x, double t) {
  if (lambda < 0.0 || x < 0.0 || t < 0.0) {
    throw DomainError("eigenfunction: lambda, x and t must be nonnegative");
  }
  return bessel_normalized(ctx.bessel_order(), lambda * t) *
         laguerre_function(m, ctx.alpha(), lambda * x * x);
}

long double laguerre_poly_explicit(int m, long double alpha, long double x) {
  if (m < 0) throw DomainError("laguerre_poly_explicit: m must be nonnegative");
  // The terms reach 1e11 times the sum for m, x near 20, so they are formed
  // and added in quad precision where the compiler provides it.
#ifdef __SIZEOF_FLOAT128__
  using Wide = __float128;
#else
  using Wide = long double;
#endif
  const Wide a = alpha;
  const Wide xx = x;
  // j = 0 term: Gamma(m + alpha + 1) / (Gamma(m + 1) Gamma(alpha + 1)).
  Wide term = 1;
  for (int k = 1; k <= m; ++k) term = term * (a + k) / k;
  Wide sum = term;
  for (int j = 0; j < m; ++j) {
    term = term * (-xx) * (m - j) / ((j + a + 1) * (j + 1));
    sum += term;
  }
  return static_cast<long double>(sum);
}

PdeResidual eigenfunction_pde_residual(const AlphaContext& ctx, double lambda, int m, double x,
                                       double t, double h) {
  if (!(x > h) || !(t > h)) throw DomainError("eigenfunction_pde_residual: requires x, t > h");
  const double a = ctx.alpha();
  auto phi = [&](double xx, double tt) { return eigenfunction(ctx, lambda, m, xx, tt); };
  auto d1 = [&](double xx) {
    const double c = phi(xx, t);
    const double tt = (phi(xx, t + h) - 2.0 * c + phi(xx, t - h)) / (h * h);
    const double dt = (phi(xx, t + h) - phi(xx, t - h)) / (2.0 * h);
    return tt + 2.0 * a / t * dt;
  };
  const double c = phi(x, t);
  const double xx = (phi(x + h, t) - 2.0 * c + phi(x - h, t)) / (h * h);
  const double dx = (phi(x + h, t) - phi(x - h, t)) / (2.0 * h);
  const double d1_here = d1(x);
  PdeResidual r;
  r.d1 = std::fabs(d1_here + lambda * lambda * c);
  r.d2 = std::fabs(xx + (2.0 * a + 1.0) / x * dx + x * x * d1_here +
                   2.0 * lambda * (2.0 * m + a + 1.0) * c);
  return r;
}

}  // namespace lbharm
