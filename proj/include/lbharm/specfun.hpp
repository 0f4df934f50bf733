#pragma once

// Special functions of the Laguerre-Bessel setting: gamma/beta, the
// normalized Bessel function j_nu, Laguerre polynomials and functions, and
// the joint eigenfunctions phi_(lambda,m)(x,t) = j_{alpha-1/2}(lambda t) *
// Lcal_m^alpha(lambda x^2).
//
// All functions are templated on the floating-point type; double is the
// working precision of the library, long double is used internally where
// the power series cancels.

#include <cmath>
#include <concepts>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "lbharm/errors.hpp"

namespace lbharm {

/// The deformation parameter alpha >= 0 together with the gamma values that
/// appear in every measure normalization.
class AlphaContext {
 public:
  explicit AlphaContext(double alpha);

  double alpha() const noexcept { return alpha_; }
  double gamma_alpha_plus_1() const noexcept { return gamma_alpha_plus_1_; }
  double gamma_alpha_plus_half() const noexcept { return gamma_alpha_plus_half_; }

  /// 3 alpha + 2. m_alpha(delta_r E) = r^{2 * half_dimension()} m_alpha(E).
  double half_dimension() const noexcept { return 3.0 * alpha_ + 2.0; }

  /// Order of the normalized Bessel factor of the eigenfunctions.
  double bessel_order() const noexcept { return alpha_ - 0.5; }

  friend bool operator==(const AlphaContext& a, const AlphaContext& b) noexcept {
    return a.alpha_ == b.alpha_;
  }

 private:
  double alpha_;
  double gamma_alpha_plus_1_;
  double gamma_alpha_plus_half_;
};

template <std::floating_point T>
T gamma_fn(T x) {
  if (!(x > T(0))) throw DomainError("gamma_fn: argument must be positive");
  return std::tgamma(x);
}

template <std::floating_point T>
T beta_fn(T a, T b) {
  if (!(a > T(0)) || !(b > T(0))) throw DomainError("beta_fn: arguments must be positive");
  if (a + b < T(150)) return std::tgamma(a) * std::tgamma(b) / std::tgamma(a + b);
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

namespace detail {

// Largest |x| evaluated by the power series; beyond it the Hankel expansion
// of J_nu takes over.
inline constexpr double kBesselSeriesLimit = 12.0;

template <std::floating_point T>
T bessel_normalized_series(T nu, T x) {
  using Acc = long double;
  const Acc q = -Acc(x) * Acc(x) / Acc(4);
  Acc term = 1;
  Acc sum = 1;
  for (int k = 1; k < 400; ++k) {
    term *= q / (Acc(k) * (Acc(nu) + Acc(k)));
    sum += term;
    // Terms alternate and decrease once k(nu+k) exceeds |q|, so the
    // remainder is bounded by the next term.
    if (Acc(k) * (Acc(nu) + Acc(k)) > -q && std::fabs(term) < Acc(1e-17)) break;
  }
  return static_cast<T>(sum);
}

// Hankel asymptotic expansion of J_nu(x), truncated at the smallest term.
template <std::floating_point T>
T bessel_j_asymptotic(T nu, T x) {
  const T mu = T(4) * nu * nu;
  T p = 1, q = 0;
  T term = 1;
  T prev = std::numeric_limits<T>::infinity();
  for (int k = 1; k < 200; ++k) {
    const T odd = T(2 * k - 1);
    term *= (mu - odd * odd) / (T(k) * T(8) * x);
    const T mag = std::fabs(term);
    if (mag > prev) break;
    prev = mag;
    // a_k / x^k enters P with sign (-1)^{k/2} for even k and Q with
    // sign (-1)^{(k-1)/2} for odd k.
    switch (k % 4) {
      case 0: p += term; break;
      case 1: q += term; break;
      case 2: p -= term; break;
      default: q -= term; break;
    }
    if (mag < std::numeric_limits<T>::epsilon() * T(1e-2)) break;
  }
  const T phase = (nu / T(2) + T(0.25)) * std::numbers::pi_v<T>;
  const T c = std::cos(x) * std::cos(phase) + std::sin(x) * std::sin(phase);
  const T s = std::sin(x) * std::cos(phase) - std::cos(x) * std::sin(phase);
  return std::sqrt(T(2) / (std::numbers::pi_v<T> * x)) * (p * c - q * s);
}

}  // namespace detail

/// Normalized Bessel function j_nu(x) = Gamma(nu+1) (2/x)^nu J_nu(x), with
/// j_nu(0) = 1. Series for |x| <= 12, Hankel expansion beyond; the latter
/// is exact for nu = +-1/2 and accurate to ~1e-10 absolute at |x| = 12 for
/// other orders, improving like exp(-2|x|).
template <std::floating_point T>
T bessel_normalized(T nu, T x) {
  if (nu < T(-0.5)) throw DomainError("bessel_normalized: order must be >= -1/2");
  if (!std::isfinite(x)) throw RangeError("bessel_normalized: non-finite argument");
  const T ax = std::fabs(x);
  if (ax <= T(detail::kBesselSeriesLimit)) return detail::bessel_normalized_series(nu, ax);
  const T log_scale = std::lgamma(nu + T(1)) + nu * std::log(T(2) / ax);
  return std::exp(log_scale) * detail::bessel_j_asymptotic(nu, ax);
}

/// L_m^alpha(x) by the three-term recurrence.
template <std::floating_point T>
T laguerre_poly(int m, T alpha, T x) {
  if (m < 0) throw DomainError("laguerre_poly: degree must be nonnegative");
  T prev = 1;
  if (m == 0) return prev;
  T cur = T(1) + alpha - x;
  for (int k = 1; k < m; ++k) {
    const T next = ((T(2 * k + 1) + alpha - x) * cur - (T(k) + alpha) * prev) / T(k + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// L_m^alpha(0) = Gamma(m+alpha+1) / (Gamma(m+1) Gamma(alpha+1)).
template <std::floating_point T>
T laguerre_at_zero(int m, T alpha) {
  if (m < 0) throw DomainError("laguerre_at_zero: degree must be nonnegative");
  if (m > 2000) {
    return std::exp(std::lgamma(T(m) + alpha + T(1)) - std::lgamma(T(m) + T(1)) -
                    std::lgamma(alpha + T(1)));
  }
  T value = 1;
  for (int k = 1; k <= m; ++k) value *= (T(k) + alpha) / T(k);
  return value;
}

/// Lcal_m^alpha(x) = exp(-x/2) L_m^alpha(x) / L_m^alpha(0), |value| <= 1.
///
/// The recurrence runs on R_k = L_k/L_k(0), which satisfies
/// (k+alpha+1) R_{k+1} = (2k+alpha+1-x) R_k - k R_{k-1} with R_k(0) = 1; the
/// exponential is applied at the end together with an accumulated scale so
/// neither factor overflows for large m x.
template <std::floating_point T>
T laguerre_function(int m, T alpha, T x) {
  if (m < 0) throw DomainError("laguerre_function: degree must be nonnegative");
  if (x < T(0)) throw DomainError("laguerre_function: argument must be nonnegative");
  if (m == 0) return std::exp(-x / T(2));
  constexpr T kRescale = T(1e150);
  T log_scale = 0;
  T prev = 1;
  T cur = T(1) - x / (alpha + T(1));
  for (int k = 1; k < m; ++k) {
    const T next = ((T(2 * k + 1) + alpha - x) * cur - T(k) * prev) / (T(k + 1) + alpha);
    prev = cur;
    cur = next;
    if (std::fabs(cur) > kRescale) {
      cur /= kRescale;
      prev /= kRescale;
      log_scale += std::log(kRescale);
    }
  }
  return cur * std::exp(log_scale - x / T(2));
}

/// Partial sum of sum_m t^m L_m^alpha(x) up to m_max, paired with the closed
/// form (1-t)^{-alpha-1} exp(-x t/(1-t)).
std::pair<double, double> generating_function_check(double alpha, double t, double x,
                                                    int m_max);

/// phi_(lambda,m)(x,t) = j_{alpha-1/2}(lambda t) Lcal_m^alpha(lambda x^2).
double eigenfunction(const AlphaContext& ctx, double lambda, int m, double x, double t);

/// L_m^alpha(x) from the explicit alternating sum
///   sum_j Gamma(m+alpha+1) (-x)^j / (Gamma(m-j+1) Gamma(j+alpha+1) j!)
/// in long double. Only for cross-checking the recurrence.
long double laguerre_poly_explicit(int m, long double alpha, long double x);

/// Finite-difference residuals of the eigenfunction system at (x, t):
///   d1 = |D1 phi + lambda^2 phi|,  D1 = d_tt + (2 alpha / t) d_t
///   d2 = |D2 phi + 2 lambda (2m + alpha + 1) phi|,
///        D2 = d_xx + ((2 alpha + 1) / x) d_x + x^2 D1.
/// Central differences with step h; x and t must exceed h.
struct PdeResidual {
  double d1 = 0.0;
  double d2 = 0.0;
};
PdeResidual eigenfunction_pde_residual(const AlphaContext& ctx, double lambda, int m, double x,
                                       double t, double h = 1e-4);

}  // namespace lbharm
