#pragma once

// Reference distributions G and the order-statistic spec (i, n).
//
// Each reference has a closed-form CDF and quantile, and a closed form for
// E[G^{-1}(B_{i:n})] where B_{i:n} ~ beta(i, n - i + 1).

#include <array>
#include <cmath>
#include <compare>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

#include "osorder/specfun.hpp"

namespace osorder {

/// Rank i and sample size n of the order statistic X_{i:n}.
class OrderStatSpec {
 public:
  OrderStatSpec(int i, int n) : i_(i), n_(n) {
    if (n < 1 || i < 1 || i > n) {
      throw std::domain_error("OrderStatSpec: need 1 <= i <= n, got (" + std::to_string(i) +
                              "," + std::to_string(n) + ")");
    }
  }
  int i() const noexcept { return i_; }
  int n() const noexcept { return n_; }

  /// Parameters of B_{i:n} ~ beta(i, n - i + 1).
  double alpha() const noexcept { return i_; }
  double beta() const noexcept { return n_ - i_ + 1; }

  friend bool operator==(const OrderStatSpec&, const OrderStatSpec&) = default;
  friend auto operator<=>(const OrderStatSpec&, const OrderStatSpec&) = default;

 private:
  int i_;
  int n_;
};

inline std::string to_string(const OrderStatSpec& s) {
  return std::to_string(s.i()) + "," + std::to_string(s.n());
}

enum class Reference { Uniform, Exponential, Logistic, LogLogistic1, NegExponential, NegLogLogistic1 };

inline constexpr std::array<Reference, 6> kAllReferences = {
    Reference::Uniform,      Reference::Exponential,    Reference::Logistic,
    Reference::LogLogistic1, Reference::NegExponential, Reference::NegLogLogistic1};

/// Short labels: U, E, L, LL, E-, LL-.
inline std::string_view short_name(Reference g) {
  switch (g) {
    case Reference::Uniform: return "U";
    case Reference::Exponential: return "E";
    case Reference::Logistic: return "L";
    case Reference::LogLogistic1: return "LL";
    case Reference::NegExponential: return "E-";
    case Reference::NegLogLogistic1: return "LL-";
  }
  return "?";
}

inline Reference parse_reference(std::string_view s) {
  for (auto g : kAllReferences) {
    if (s == short_name(g)) return g;
  }
  if (s == "uniform") return Reference::Uniform;
  if (s == "exponential") return Reference::Exponential;
  if (s == "logistic") return Reference::Logistic;
  if (s == "loglogistic1") return Reference::LogLogistic1;
  if (s == "negexponential") return Reference::NegExponential;
  if (s == "negloglogistic1") return Reference::NegLogLogistic1;
  throw std::invalid_argument("unknown reference distribution '" + std::string(s) + "'");
}

/// Closed support [lo, hi] of G (possibly infinite).
struct Support {
  double lo;
  double hi;
};

inline Support support(Reference g) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (g) {
    case Reference::Uniform: return {0.0, 1.0};
    case Reference::Exponential:
    case Reference::LogLogistic1: return {0.0, inf};
    case Reference::Logistic: return {-inf, inf};
    case Reference::NegExponential:
    case Reference::NegLogLogistic1: return {-inf, 0.0};
  }
  return {-inf, inf};
}

inline bool has_nonnegative_support(Reference g) { return support(g).lo >= 0.0; }

/// CDF value; `clamped` is set when x fell outside the support.
struct CdfValue {
  double p;
  bool clamped;
};

inline CdfValue cdf(Reference g, double x) {
  const auto sup = support(g);
  if (x < sup.lo) return {0.0, true};
  if (x > sup.hi) return {1.0, true};
  switch (g) {
    case Reference::Uniform: return {x, false};
    case Reference::Exponential: return {-std::expm1(-x), false};
    case Reference::Logistic: return {1.0 / (std::exp(-x) + 1.0), false};
    case Reference::LogLogistic1:
      return {std::isinf(x) ? 1.0 : x / (1.0 + x), false};
    case Reference::NegExponential: return {std::exp(x), false};
    case Reference::NegLogLogistic1: return {1.0 / (1.0 - x), false};
  }
  return {0.0, true};
}

/// Density of G at x (zero outside the support).
inline double pdf(Reference g, double x) {
  const auto sup = support(g);
  if (x < sup.lo || x > sup.hi) return 0.0;
  switch (g) {
    case Reference::Uniform: return 1.0;
    case Reference::Exponential: return std::exp(-x);
    case Reference::Logistic: {
      const double e = std::exp(-std::fabs(x));
      return e / ((1.0 + e) * (1.0 + e));
    }
    case Reference::LogLogistic1: return 1.0 / ((1.0 + x) * (1.0 + x));
    case Reference::NegExponential: return std::exp(x);
    case Reference::NegLogLogistic1: return 1.0 / ((1.0 - x) * (1.0 - x));
  }
  return 0.0;
}

/// G^{-1}(p) for p in the open interval (0, 1).
inline double quantile(Reference g, double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("quantile: p must lie in (0, 1)");
  switch (g) {
    case Reference::Uniform: return p;
    case Reference::Exponential: return -std::log1p(-p);
    case Reference::Logistic: return std::log(p) - std::log1p(-p);
    case Reference::LogLogistic1: return p / (1.0 - p);
    case Reference::NegExponential: return std::log(p);
    case Reference::NegLogLogistic1: return -(1.0 - p) / p;
  }
  return 0.0;
}

/// E[G^{-1}(B_{i:n})]. Divergent cases return a signed infinity:
/// +inf for LogLogistic1 at i = n and -inf for NegLogLogistic1 at i = 1.
inline double expected_transformed_orderstat(Reference g, const OrderStatSpec& s) {
  const int i = s.i();
  const int n = s.n();
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (g) {
    case Reference::Uniform: return static_cast<double>(i) / (n + 1);
    case Reference::Exponential: return harmonic_sum(n - i + 1, n);
    case Reference::NegExponential: return -harmonic_sum(i, n);
    case Reference::Logistic: return digamma(i) - digamma(n - i + 1);
    case Reference::LogLogistic1: return i == n ? inf : static_cast<double>(i) / (n - i);
    // E[(1 - B) / B] = E[1 / B] - 1 = n / (i - 1) - 1.
    case Reference::NegLogLogistic1:
      return i == 1 ? -inf : -static_cast<double>(n - i + 1) / (i - 1);
  }
  return 0.0;
}

inline bool is_divergent(double v) { return std::isinf(v); }

}  // namespace osorder
