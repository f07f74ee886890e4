#pragma once

// Distributional objects for B_{i:n} and W = G^{-1}(B_{i:n}): CDFs, quantiles
// and partial expectations evaluated by adaptive quadrature.

#include <cmath>
#include <limits>
#include <stdexcept>

#include "osorder/quadrature.hpp"
#include "osorder/refdist.hpp"
#include "osorder/specfun.hpp"

namespace osorder {

/// F_{B_{i:n}}(x) = I_x(i, n - i + 1).
inline double beta_orderstat_cdf(const OrderStatSpec& s, double x) {
  return reg_inc_beta(x, s.alpha(), s.beta());
}

inline double beta_orderstat_pdf(const OrderStatSpec& s, double u) {
  return beta_pdf(u, s.alpha(), s.beta());
}

/// The random variable G^{-1}(B_{i:n}).
struct TransformedOrderStat {
  Reference g;
  OrderStatSpec s;
};

inline double expectation(const TransformedOrderStat& t) {
  return expected_transformed_orderstat(t.g, t.s);
}

/// Sign of the divergence of E[W]: +1 (LogLogistic1, i = n), -1
/// (NegLogLogistic1, i = 1), 0 when the mean is finite.
inline int mean_divergence(const TransformedOrderStat& t) {
  if (t.g == Reference::LogLogistic1 && t.s.i() == t.s.n()) return 1;
  if (t.g == Reference::NegLogLogistic1 && t.s.i() == 1) return -1;
  return 0;
}

inline double cdf(const TransformedOrderStat& t, double x) {
  return beta_orderstat_cdf(t.s, cdf(t.g, x).p);
}

/// p-quantile of G^{-1}(B_{i:n}), p in (0, 1).
inline double quantile(const TransformedOrderStat& t, double p) {
  const double u = inverse_reg_inc_beta(p, t.s.alpha(), t.s.beta());
  if (u <= 0.0) return support(t.g).lo;
  if (u >= 1.0) return support(t.g).hi;
  return quantile(t.g, u);
}

namespace detail {

// ln of the beta(i, n-i+1) kernel without the normaliser, in a form that stays
// accurate when u is given through its complement.
inline double log_beta_kernel(const OrderStatSpec& s, double log_u, double log_1mu) {
  double k = 0.0;
  if (s.i() != 1) k += (s.alpha() - 1.0) * log_u;
  if (s.i() != s.n()) k += (s.beta() - 1.0) * log_1mu;
  return k;
}

inline QuadratureOptions with_tol(double tol) {
  QuadratureOptions o;
  o.abs_tol = tol;
  return o;
}

}  // namespace detail

/// Partial mean E[W; W > x] = \int_{G(x)}^1 G^{-1}(u) beta_pdf(u; i, n-i+1) du
/// for references with nonnegative support. At x = 0 this is the full mean.
///
/// Exponential is integrated in v = -log(1 - u) over [x, inf); LogLogistic1 in
/// u, where the odds factor cancels against (1 - u)^{n-i} leaving a polynomial.
inline double upper_partial_mean(const TransformedOrderStat& t, double x, double tol = 1e-10) {
  if (!has_nonnegative_support(t.g)) {
    throw std::domain_error("upper_partial_mean: reference must have nonnegative support");
  }
  if (x < 0.0) throw std::domain_error("upper_partial_mean: x must be nonnegative");
  const auto& s = t.s;
  const double log_norm = log_beta(s.alpha(), s.beta());
  const auto opts = detail::with_tol(tol);

  switch (t.g) {
    case Reference::Uniform: {
      if (x >= 1.0) return 0.0;
      auto f = [&](double u) { return u * beta_orderstat_pdf(s, u); };
      return integrate(f, x, 1.0, opts).value;
    }
    case Reference::Exponential: {
      auto f = [&](double v) {
        if (v <= 0.0) return 0.0;
        const double log_1mu = -v;
        const double log_u = std::log(-std::expm1(-v));
        return v * std::exp(detail::log_beta_kernel(s, log_u, log_1mu) - v - log_norm);
      };
      return integrate_to_infinity(f, x, opts).value;
    }
    case Reference::LogLogistic1: {
      if (s.i() == s.n()) return std::numeric_limits<double>::infinity();
      if (std::isinf(x)) return 0.0;
      const double u0 = x / (1.0 + x);
      // u / (1 - u) * u^{i-1} (1 - u)^{n-i} = u^i (1 - u)^{n-i-1}
      auto f = [&](double u) {
        double k = s.i() * std::log(u) - log_norm;
        if (s.n() - s.i() - 1 != 0) k += (s.n() - s.i() - 1) * std::log1p(-u);
        return std::exp(k);
      };
      return integrate(f, u0, 1.0, opts).value;
    }
    default: break;
  }
  return 0.0;
}

/// Stop-loss transform E[(W - c)_+] for any reference. +inf when the upper tail
/// of W is not integrable (LogLogistic1 at i = n).
inline double stop_loss(const TransformedOrderStat& t, double c, double tol = 1e-10) {
  const auto& s = t.s;
  if (mean_divergence(t) > 0) return std::numeric_limits<double>::infinity();
  const auto opts = detail::with_tol(tol);
  const double u0 = cdf(t.g, c).p;
  auto f = [&](double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    const double w = quantile(t.g, u) - c;
    return w > 0.0 ? w * beta_orderstat_pdf(s, u) : 0.0;
  };
  return integrate(f, u0, 1.0, opts).value;
}

/// Lower stop-loss transform E[(c - W)_+]. +inf when the lower tail of W is
/// not integrable (NegLogLogistic1 at i = 1).
inline double lower_stop_loss(const TransformedOrderStat& t, double c, double tol = 1e-10) {
  const auto& s = t.s;
  if (mean_divergence(t) < 0) return std::numeric_limits<double>::infinity();
  const auto opts = detail::with_tol(tol);
  const double u1 = cdf(t.g, c).p;
  auto f = [&](double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    const double w = c - quantile(t.g, u);
    return w > 0.0 ? w * beta_orderstat_pdf(s, u) : 0.0;
  };
  return integrate(f, 0.0, u1, opts).value;
}

/// E[W] by quadrature of \int_0^1 G^{-1}(u) beta_pdf(u) du, split at the median
/// so that each half carries at most one endpoint singularity.
inline double expectation_by_quadrature(const TransformedOrderStat& t, double tol = 1e-10) {
  if (const int d = mean_divergence(t); d != 0) return d * std::numeric_limits<double>::infinity();
  const auto opts = detail::with_tol(0.5 * tol);
  auto f = [&](double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    return quantile(t.g, u) * beta_orderstat_pdf(t.s, u);
  };
  const double mid = 0.5;
  return integrate(f, 0.0, mid, opts).value + integrate(f, mid, 1.0, opts).value;
}

}  // namespace osorder
