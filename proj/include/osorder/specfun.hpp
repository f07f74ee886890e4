#pragma once

// Special functions used throughout the library: partial harmonic sums,
// digamma, log-beta and the regularized incomplete beta function together
// with its inverse.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace osorder {

/// Inclusive integer range [lo, hi] for partial harmonic sums.
class HarmonicRange {
 public:
  HarmonicRange(long lo, long hi) : lo_(lo), hi_(hi) {
    if (lo < 1 || hi < lo) {
      throw std::domain_error("HarmonicRange: need 1 <= lo <= hi, got [" +
                              std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
  }
  long lo() const noexcept { return lo_; }
  long hi() const noexcept { return hi_; }

 private:
  long lo_;
  long hi_;
};

/// Sum of 1/k for k in [lo, hi], accumulated from the largest denominator down.
inline double harmonic_sum(const HarmonicRange& r) {
  double s = 0.0;
  for (long k = r.hi(); k >= r.lo(); --k) s += 1.0 / static_cast<double>(k);
  return s;
}

inline double harmonic_sum(long lo, long hi) { return harmonic_sum(HarmonicRange(lo, hi)); }

/// Digamma function for x > 0.
///
/// Shifts the argument above 6 with the recurrence psi(x) = psi(x+1) - 1/x and
/// then applies the asymptotic expansion with Bernoulli terms through x^-14.
inline double digamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("digamma: argument must be positive");
  double shift = 0.0;
  while (x < 6.0) {
    shift += 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // B_{2k} / (2k) for k = 1..7, applied to x^{-2k}.
  const double series =
      inv2 * (1.0 / 12.0 -
      inv2 * (1.0 / 120.0 -
      inv2 * (1.0 / 252.0 -
      inv2 * (1.0 / 240.0 -
      inv2 * (1.0 / 132.0 -
      inv2 * (691.0 / 32760.0 -
      inv2 * (1.0 / 12.0)))))));
  return std::log(x) - 0.5 * inv - series - shift;
}

/// ln B(a, b) for a, b > 0.
inline double log_beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("log_beta: arguments must be positive");
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

/// Density of beta(a, b) at u in [0, 1].
inline double beta_pdf(double u, double a, double b) {
  if (u < 0.0 || u > 1.0) return 0.0;
  double log_kernel = -log_beta(a, b);
  if (a != 1.0) {
    if (u == 0.0) return a < 1.0 ? std::numeric_limits<double>::infinity() : 0.0;
    log_kernel += (a - 1.0) * std::log(u);
  }
  if (b != 1.0) {
    if (u == 1.0) return b < 1.0 ? std::numeric_limits<double>::infinity() : 0.0;
    log_kernel += (b - 1.0) * std::log1p(-u);
  }
  return std::exp(log_kernel);
}

namespace detail {

// Modified Lentz evaluation of the incomplete beta continued fraction.
inline double inc_beta_cf(double x, double a, double b) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-14;
  constexpr int max_iter = 300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

}  // namespace detail

/// Regularized incomplete beta function I_x(a, b).
inline double reg_inc_beta(double x, double a, double b) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("reg_inc_beta: x must lie in [0, 1]");
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("reg_inc_beta: a and b must be positive");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
  const double front = std::exp(log_front);
  double result;
  if (x <= a / (a + b)) {
    result = front * detail::inc_beta_cf(x, a, b) / a;
  } else {
    result = 1.0 - front * detail::inc_beta_cf(1.0 - x, b, a) / b;
  }
  if (result < 0.0) return 0.0;
  if (result > 1.0) return 1.0;
  return result;
}

/// Inverse of x -> I_x(a, b): the beta(a, b) quantile at probability p.
///
/// Safeguarded Newton iteration inside a shrinking bisection bracket.
inline double inverse_reg_inc_beta(double p, double a, double b) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("inverse_reg_inc_beta: p must lie in [0, 1]");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  double x = a / (a + b);
  for (int it = 0; it < 200; ++it) {
    const double f = reg_inc_beta(x, a, b) - p;
    if (f == 0.0) return x;
    if (f < 0.0) lo = x; else hi = x;
    const double dens = beta_pdf(x, a, b);
    double next = (dens > 0.0 && std::isfinite(dens)) ? x - f / dens : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(x, 1e-300)) {
      return next;
    }
    if (hi - lo <= std::numeric_limits<double>::min()) return next;
    x = next;
  }
  return x;
}

}  // namespace osorder
