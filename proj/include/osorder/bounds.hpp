#pragma once

// Bounds on the exceedance probability P(X <= E X_{i:n}).
//
// For F in F_V^G (G^{-1} o F convex) Jensen gives P(X <= E X_{i:n}) <= p_{i:n}^G,
// for F in F_C^G the reverse inequality, where p_{i:n}^G = G(E G^{-1}(B_{i:n})).

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <limits>
#include <span>
#include <stdexcept>
#include <sstream>
#include <string>
#include <vector>

#include "osorder/orderstat.hpp"
#include "osorder/refdist.hpp"
#include "osorder/shape.hpp"
#include "osorder/specfun.hpp"

namespace osorder {

/// p_{i:n}^G. Closed forms for U, E, LL and E-; other references go through
/// G(E G^{-1}(B_{i:n})), with divergent means mapping to 0 or 1.
inline double p_value(Reference g, const OrderStatSpec& s) {
  const int i = s.i(), n = s.n();
  switch (g) {
    case Reference::Uniform: return static_cast<double>(i) / (n + 1);
    case Reference::Exponential: return -std::expm1(-harmonic_sum(n - i + 1, n));
    case Reference::LogLogistic1: return static_cast<double>(i) / n;
    case Reference::NegExponential: return std::exp(-harmonic_sum(i, n));
    default: break;
  }
  const double mean = expected_transformed_orderstat(g, s);
  if (mean == std::numeric_limits<double>::infinity()) return 1.0;
  if (mean == -std::numeric_limits<double>::infinity()) return 0.0;
  return cdf(g, mean).p;
}

/// p_{i:n}^G by composing the reference CDF with the closed-form mean.
inline double p_value_generic(Reference g, const OrderStatSpec& s) {
  const double mean = expected_transformed_orderstat(g, s);
  if (mean == std::numeric_limits<double>::infinity()) return 1.0;
  if (mean == -std::numeric_limits<double>::infinity()) return 0.0;
  return cdf(g, mean).p;
}

struct ExceedanceBound {
  Reference g;
  OrderStatSpec s;
  double p;
  BoundDirection direction;
};

/// The bound a convex-ordered class yields for P(X <= E X_{i:n}).
inline ExceedanceBound exceedance_bound(const ShapeClass& shape, const OrderStatSpec& s) {
  const auto dir = bound_direction(shape);
  if (!dir) {
    throw std::invalid_argument("class " + std::string(to_string(shape.name)) +
                                " is not convex-ordered and yields no exceedance bound");
  }
  return {shape.reference, s, p_value(shape.reference, s), *dir};
}

struct BoundInterval {
  ShapeClass lower_class;
  ShapeClass upper_class;
  OrderStatSpec s;
  double lo;
  double hi;
};

/// lo > hi: no parent can belong to both classes.
class infeasible_pair : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Interval for P(X <= E X_{i:n}) when F lies in both classes. `lower_shape`
/// must be convex-generated (lower bound), `upper_shape` concave-generated.
inline BoundInterval exceedance_interval(const ShapeClass& lower_shape, const ShapeClass& upper_shape,
                                         const OrderStatSpec& s) {
  const auto lo = exceedance_bound(lower_shape, s);
  const auto hi = exceedance_bound(upper_shape, s);
  if (lo.direction != BoundDirection::LowerBound) {
    throw std::invalid_argument("class " + std::string(to_string(lower_shape.name)) +
                                " gives an upper bound, not a lower bound");
  }
  if (hi.direction != BoundDirection::UpperBound) {
    throw std::invalid_argument("class " + std::string(to_string(upper_shape.name)) +
                                " gives a lower bound, not an upper bound");
  }
  if (lo.p > hi.p) {
    throw infeasible_pair("classes " + std::string(to_string(lower_shape.name)) + " and " +
                          std::string(to_string(upper_shape.name)) + " are incompatible at (" +
                          to_string(s) + "): lower bound " + std::to_string(lo.p) +
                          " exceeds upper bound " + std::to_string(hi.p));
  }
  return {lower_shape, upper_shape, s, lo.p, hi.p};
}

/// Rounds to `digits` decimals, ties to even, and renders with exactly that
/// many decimals.
inline std::string format_fixed_half_even(double v, int digits = 3) {
  const double scale = std::pow(10.0, digits);
  const double scaled = v * scale;
  double r = std::nearbyint(scaled);  // default rounding mode: ties to even
  // Representation error can put an exact decimal tie a hair off .5.
  const double frac = scaled - std::floor(scaled);
  if (std::fabs(frac - 0.5) < 1e-9) {
    const double fl = std::floor(scaled);
    r = std::fmod(fl, 2.0) == 0.0 ? fl : fl + 1.0;
  }
  const bool neg = r < 0;
  long long q = static_cast<long long>(std::fabs(r));
  const long long unit = static_cast<long long>(scale);
  std::string out = (neg ? "-" : "") + std::to_string(q / unit);
  if (digits > 0) {
    std::string frac_part = std::to_string(q % unit);
    frac_part.insert(0, static_cast<std::size_t>(digits) - frac_part.size(), '0');
    out += "." + frac_part;
  }
  return out;
}

/// p_{i:n}^G for i = 1..n (columns) and each G in `gs` (rows).
struct BoundTable {
  int n;
  std::vector<Reference> gs;
  std::vector<std::vector<double>> rows;
};

inline BoundTable bound_table(int n, std::span<const Reference> gs) {
  if (n < 1) throw std::domain_error("bound_table: n must be positive");
  BoundTable t{n, {gs.begin(), gs.end()}, {}};
  for (auto g : gs) {
    std::vector<double> row;
    row.reserve(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) row.push_back(p_value(g, OrderStatSpec(i, n)));
    t.rows.push_back(std::move(row));
  }
  return t;
}

/// The four references with closed-form p-values, in stochastic order
/// LL >= E >= U >= E-.
inline constexpr std::array<Reference, 4> kTableReferences = {
    Reference::LogLogistic1, Reference::Exponential, Reference::Uniform, Reference::NegExponential};

/// CSV rendering: header "G,i=1,...,i=n", one row per reference, 3 decimals.
inline std::string bound_table_csv(const BoundTable& t) {
  std::string out = "G";
  for (int i = 1; i <= t.n; ++i) out += ",i=" + std::to_string(i);
  out += '\n';
  for (std::size_t r = 0; r < t.gs.size(); ++r) {
    out += short_name(t.gs[r]);
    for (double p : t.rows[r]) out += "," + format_fixed_half_even(p, 3);
    out += '\n';
  }
  return out;
}

/// Result of checking E X_{i:n} = LL^{-1}(i/n) = i/(n-i) for the LL1 parent.
struct LogLogisticCheck {
  double expectation_quadrature;
  double closed_form;
  double quantile_at_i_over_n;
  bool agrees;
};

inline LogLogisticCheck ll1_characterization_check(const OrderStatSpec& s, double tol = 1e-8) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (s.i() == s.n()) return {inf, inf, inf, true};
  const double quad = upper_partial_mean({Reference::LogLogistic1, s}, 0.0, 1e-12);
  const double closed = static_cast<double>(s.i()) / (s.n() - s.i());
  const double q = quantile(Reference::LogLogistic1, static_cast<double>(s.i()) / s.n());
  const bool ok = std::fabs(quad - closed) <= tol && std::fabs(q - closed) <= 1e-12 * std::max(1.0, closed);
  return {quad, closed, q, ok};
}

/// Left-continuous ECDF inverse: smallest x_(k) with k/n >= p.
inline double ecdf_inverse(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::domain_error("ecdf_inverse: empty sample");
  const std::size_t n = sorted.size();
  if (p <= 0.0) return sorted.front();
  if (p >= 1.0) return sorted.back();
  const double nd = static_cast<double>(n);
  auto k = static_cast<std::size_t>(std::ceil(p * nd));
  k = std::clamp<std::size_t>(k, 1, n);
  while (k > 1 && static_cast<double>(k - 1) / nd >= p) --k;
  while (k < n && static_cast<double>(k) / nd < p) ++k;
  return sorted[k - 1];
}

struct PluginInterval {
  double lo;
  double hi;
  double p_lo;
  double p_hi;
};

/// Plug-in interval [F_n^{-1}(p^{G_lower}), F_n^{-1}(p^{G_upper})] for E X_{i:n}.
inline PluginInterval ecdf_plugin_interval(std::span<const double> sorted, const OrderStatSpec& s,
                                           const ShapeClass& lower_shape, const ShapeClass& upper_shape) {
  if (sorted.empty()) throw std::domain_error("ecdf_plugin_interval: empty sample");
  if (static_cast<std::size_t>(s.n()) != sorted.size()) {
    throw std::domain_error("ecdf_plugin_interval: n must equal the sample size (" +
                            std::to_string(sorted.size()) + ")");
  }
  if (!std::is_sorted(sorted.begin(), sorted.end())) {
    throw std::domain_error("ecdf_plugin_interval: sample must be sorted");
  }
  const auto iv = exceedance_interval(lower_shape, upper_shape, s);
  return {ecdf_inverse(sorted, iv.lo), ecdf_inverse(sorted, iv.hi), iv.lo, iv.hi};
}

/// Reads a one-column CSV of observations. A non-numeric first line is taken
/// as a header; blank lines are skipped. Returns the values sorted.
inline std::vector<double> read_sample_csv(std::istream& in) {
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    std::string cell = line.substr(first, line.find_last_not_of(" \t") - first + 1);
    if (cell.size() >= 2 && cell.front() == '"' && cell.back() == '"') cell = cell.substr(1, cell.size() - 2);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != cell.size() || !std::isfinite(v)) {
      if (out.empty() && lineno == 1) continue;
      throw std::domain_error("read_sample_csv: line " + std::to_string(lineno) + " is not a finite number: '" +
                              cell + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw std::domain_error("read_sample_csv: no observations");
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace osorder
