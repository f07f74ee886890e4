#pragma once

// Star-shaped order between transformed beta order statistics.
//
// For F in DDA (F^{-1} star-shaped) X_{i:n} >=_ss X_{j:m} follows from
// B_{i:n} >=_ss B_{j:m}, i.e. from Z(x) >= 0 on [0, 1] where
//
//   Z(x) = i/(n+1) (1 - F_{B_{i+1:n+1}}(x)) - j/(m+1) (1 - F_{B_{j+1:m+1}}(x)).
//
// For F in DHRA the same holds in the exponential frame -log(1 - B). In both
// frames the interior extrema of Z sit at roots of
//
//   T_{i-j, (n-i)-(m-j)}(u) = B(i, n-i+1) / B(j, m-j+1),   T_{a,b}(u) = u^a (1-u)^b,
//
// so Z only needs checking at 0, 1 and those roots. Every verdict is also
// cross-checked against a dense grid.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "osorder/conditions.hpp"
#include "osorder/orderstat.hpp"
#include "osorder/quadrature.hpp"
#include "osorder/refdist.hpp"
#include "osorder/specfun.hpp"

namespace osorder {

// ---------------------------------------------------------------------------
// Roots of T_{a,b}(x) = c on (0, 1)

enum class RootRegime { Monotone, Unimodal };

inline std::string_view to_string(RootRegime r) {
  return r == RootRegime::Monotone ? "monotone" : "unimodal";
}

struct RootSet {
  std::vector<double> roots;   ///< ascending, in (0, 1)
  std::vector<double> logits;  ///< log(x / (1 - x)) of each root, same order
  RootRegime regime;
  double a;
  double b;
  double c;
  /// Stationary point a/(a+b) and the log-residual there (unimodal regime only).
  std::optional<double> stationary;
  std::optional<double> stationary_residual;
  int bisection_steps = 0;
};

namespace detail {

inline double log_sigmoid(double y) {
  return y >= 0.0 ? -std::log1p(std::exp(-y)) : y - std::log1p(std::exp(y));
}

inline double sigmoid(double y) {
  return y >= 0.0 ? 1.0 / (1.0 + std::exp(-y)) : std::exp(y) / (1.0 + std::exp(y));
}

// Search range in logit space; covers x in roughly [1e-304, 1 - 1e-304].
inline constexpr double kLogitRange = 700.0;

}  // namespace detail

/// a ln x + b ln(1 - x) - ln c with x given by its logit y.
inline double log_T_residual(double a, double b, double c, double logit) {
  return a * detail::log_sigmoid(logit) + b * detail::log_sigmoid(-logit) - std::log(c);
}

/// All solutions of x^a (1 - x)^b = c in (0, 1).
///
/// ab <= 0: the log-curve is monotone, at most one root. ab > 0: the curve has
/// a single interior extremum at a/(a+b) and each side is bisected separately.
/// Roots are located by bisection in the logit variable so that roots very
/// close to 0 or 1 keep full relative accuracy.
inline RootSet solve_T(double a, double b, double c) {
  if (!(c > 0.0)) throw std::domain_error("solve_T: c must be positive");
  if (a == 0.0 && b == 0.0) throw std::domain_error("solve_T: (a, b) must not both be zero");

  RootSet out{{}, {}, a * b > 0.0 ? RootRegime::Unimodal : RootRegime::Monotone, a, b, c,
              std::nullopt, std::nullopt, 0};
  auto f = [&](double y) { return log_T_residual(a, b, c, y); };

  auto bisect = [&](double lo, double hi) {
    double flo = f(lo);
    for (int it = 0; it < 400; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double fm = f(mid);
      ++out.bisection_steps;
      if (fm == 0.0) return mid;
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };
  auto push = [&](double y) {
    out.logits.push_back(y);
    out.roots.push_back(detail::sigmoid(y));
  };
  auto crosses = [](double fa, double fb) { return (fa <= 0.0 && fb >= 0.0) || (fa >= 0.0 && fb <= 0.0); };

  const double Y = detail::kLogitRange;
  if (out.regime == RootRegime::Monotone) {
    const double flo = f(-Y), fhi = f(Y);
    if (crosses(flo, fhi) && !(flo == 0.0 && fhi == 0.0)) push(bisect(-Y, Y));
    return out;
  }

  const double ystar = std::log(a / b);
  const double fstar = f(ystar);
  out.stationary = a / (a + b);
  out.stationary_residual = fstar;
  const double scale = std::fabs(a) + std::fabs(b) + std::fabs(std::log(c)) + 1.0;
  if (std::fabs(fstar) <= 1e-14 * scale) {
    push(ystar);  // tangency
    return out;
  }
  // a, b > 0: interior maximum, f -> -inf at both ends; a, b < 0: minimum.
  const bool has_crossing = (a > 0.0) ? fstar > 0.0 : fstar < 0.0;
  if (!has_crossing) return out;
  if (crosses(f(-Y), fstar)) push(bisect(-Y, ystar));
  if (crosses(fstar, f(Y))) push(bisect(ystar, Y));
  return out;
}

// ---------------------------------------------------------------------------
// DDA criterion

/// Z(x) = i/(n+1) (1 - I_x(i+1, n-i+1)) - j/(m+1) (1 - I_x(j+1, m-j+1)).
inline double z_dda(const OrderStatSpec& a, const OrderStatSpec& b, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("z_dda: x must lie in [0, 1]");
  auto term = [x](const OrderStatSpec& s) {
    const double w = static_cast<double>(s.i()) / (s.n() + 1);
    // 1 - I_x(p, q) = I_{1-x}(q, p)
    return w * reg_inc_beta(1.0 - x, s.n() - s.i() + 1, s.i() + 1);
  };
  return term(a) - term(b);
}

/// Z'(x) = -x^i (1-x)^{n-i} / B(i, n-i+1) + x^j (1-x)^{m-j} / B(j, m-j+1).
inline double z_dda_derivative(const OrderStatSpec& a, const OrderStatSpec& b, double x) {
  return -x * beta_orderstat_pdf(a, x) + x * beta_orderstat_pdf(b, x);
}

/// Root targets for the critical points of Z.
struct CriticalConstants {
  double exponent_a;  ///< i - j
  double exponent_b;  ///< (n - i) - (m - j)
  double primary;     ///< B(i, n-i+1) / B(j, m-j+1)
  double alternative; ///< B(i+1, n-i+1) / B(j+1, m-j+1)
};

inline CriticalConstants critical_constants(const OrderStatSpec& a, const OrderStatSpec& b) {
  return {static_cast<double>(a.i() - b.i()),
          static_cast<double>((a.n() - a.i()) - (b.n() - b.i())),
          std::exp(log_beta(a.alpha(), a.beta()) - log_beta(b.alpha(), b.beta())),
          std::exp(log_beta(a.alpha() + 1, a.beta()) - log_beta(b.alpha() + 1, b.beta()))};
}

struct SsOptions {
  double tolerance = 1e-12;   ///< Z(r) >= -tolerance counts as nonnegative
  int grid_points = 10000;    ///< dense cross-check grid
  int refine_factor = 10;
};

struct SsCandidate {
  double u;  ///< point in the beta frame, [0, 1]
  double z;
  std::string source;
};

/// Full record of a star-shaped order check.
struct SsReport {
  OrderStatSpec a;
  OrderStatSpec b;
  RootSet primary_roots;
  std::optional<RootSet> alternative_roots = std::nullopt;
  std::vector<SsCandidate> candidates = {};
  double candidate_min = 0.0;
  double candidate_argmin = 0.0;
  double grid_min = 0.0;
  double grid_argmin = 0.0;
  bool cross_check_agrees = true;
  OrderVerdict verdict = {StochasticOrder::SS, VerdictStatus::Undetermined, 0.0, 0.0, "", ""};
};

namespace detail {

struct GridScan {
  double min;
  double argmin;
};

// Minimum of z over a uniform grid on [0, 1], refined around every sign
// change and around the coarse minimiser.
template <class Z>
GridScan dense_grid_min(Z&& z, const SsOptions& opts) {
  const int N = opts.grid_points;
  std::vector<double> values(static_cast<std::size_t>(N) + 1);
  for (int k = 0; k <= N; ++k) values[k] = z(static_cast<double>(k) / N);
  GridScan best{values[0], 0.0};
  for (int k = 1; k <= N; ++k) {
    if (values[k] < best.min) best = {values[k], static_cast<double>(k) / N};
  }
  auto refine_cell = [&](int k) {
    // cells [k-1, k] and [k, k+1]
    const double lo = std::max(0.0, static_cast<double>(k - 1) / N);
    const double hi = std::min(1.0, static_cast<double>(k + 1) / N);
    const int steps = 2 * opts.refine_factor;
    for (int r = 1; r < steps; ++r) {
      const double x = lo + (hi - lo) * r / steps;
      const double v = z(x);
      if (v < best.min) best = {v, x};
    }
  };
  const int coarse_arg = static_cast<int>(std::lround(best.argmin * N));
  refine_cell(coarse_arg);
  for (int k = 1; k <= N; ++k) {
    if ((values[k - 1] < 0.0) != (values[k] < 0.0)) refine_cell(k);
  }
  return best;
}

inline void collect_roots(std::vector<SsCandidate>& out, const RootSet& rs, const std::string& tag) {
  for (double r : rs.roots) out.push_back({r, 0.0, tag});
}

template <class Z, class Scan>
SsReport finish_report(SsReport rep, Z&& z, Scan&& scan, const std::string& frame,
                       const SsOptions& opts) {
  for (auto& cnd : rep.candidates) cnd.z = z(cnd.u);
  auto it = std::min_element(rep.candidates.begin(), rep.candidates.end(),
                             [](const auto& x, const auto& y) { return x.z < y.z; });
  rep.candidate_min = it->z;
  rep.candidate_argmin = it->u;
  const auto g = scan();
  rep.grid_min = g.min;
  rep.grid_argmin = g.argmin;
  const bool cand_ok = rep.candidate_min >= -opts.tolerance;
  const bool grid_ok = rep.grid_min >= -opts.tolerance;
  rep.cross_check_agrees = cand_ok == grid_ok;
  rep.verdict = {StochasticOrder::SS,
                 cand_ok && grid_ok ? VerdictStatus::Holds : VerdictStatus::Undetermined,
                 rep.candidate_min,
                 rep.grid_min,
                 frame + ": min Z over {0, 1, critical points} >= 0",
                 ""};
  if (!rep.cross_check_agrees) {
    rep.verdict.note = "critical-point minimum and dense-grid minimum disagree in sign";
  } else if (!rep.verdict.holds()) {
    const double z0 = z(0.0);
    rep.verdict.note = z0 < -opts.tolerance
                           ? "Z(0) < 0: expected values are reversed, no ss-comparability"
                           : "Z is negative at an interior critical point";
  }
  return rep;
}

}  // namespace detail

/// Detailed DDA check of X_{i:n} >=_ss X_{j:m}.
inline SsReport check_ss_dda_report(const OrderStatSpec& a, const OrderStatSpec& b,
                                    const SsOptions& opts = {}) {
  if (a == b) {
    SsReport rep{a, b, RootSet{{}, {}, RootRegime::Monotone, 0, 0, 1, {}, {}, 0}};
    rep.candidates = {{0.0, 0.0, "endpoint"}, {1.0, 0.0, "endpoint"}};
    rep.verdict = {StochasticOrder::SS, VerdictStatus::Holds, 0.0, 0.0,
                   "identical order statistics (Z == 0)", ""};
    return rep;
  }
  const auto cc = critical_constants(a, b);
  SsReport rep{a, b, solve_T(cc.exponent_a, cc.exponent_b, cc.primary)};
  rep.alternative_roots = solve_T(cc.exponent_a, cc.exponent_b, cc.alternative);
  rep.candidates = {{0.0, 0.0, "endpoint"}, {1.0, 0.0, "endpoint"}};
  detail::collect_roots(rep.candidates, rep.primary_roots, "critical");
  detail::collect_roots(rep.candidates, *rep.alternative_roots, "alternative");
  auto z = [&](double u) { return z_dda(a, b, u); };
  auto scan = [&] { return detail::dense_grid_min(z, opts); };
  return detail::finish_report(std::move(rep), z, scan, "DDA", opts);
}

inline OrderVerdict check_ss_dda(const OrderStatSpec& a, const OrderStatSpec& b,
                                 const SsOptions& opts = {}) {
  return check_ss_dda_report(a, b, opts).verdict;
}

// ---------------------------------------------------------------------------
// DHRA criterion: the exponential frame V = -log(1 - B_{i:n})

/// Binomial expansion of E[V; V > x] for V = -log(1 - B_{i:n}):
///   i C(n,i) sum_{k<i} C(i-1,k) (-1)^{i-1-k} e^{-(n-k)x} ((n-k)x + 1) / (n-k)^2.
struct SeriesValue {
  double value;
  double condition;  ///< max |term| / |value|
};

inline SeriesValue dhra_tail_series(const OrderStatSpec& s, double x) {
  const int i = s.i(), n = s.n();
  // log of i C(n, i) = n! / ((i-1)! (n-i)!)
  const double log_front = std::lgamma(n + 1.0) - std::lgamma(static_cast<double>(i)) -
                           std::lgamma(n - i + 1.0);
  double sum = 0.0;
  double max_term = 0.0;
  for (int k = 0; k <= i - 1; ++k) {
    const double lam = n - k;
    const double log_binom = std::lgamma(static_cast<double>(i)) - std::lgamma(k + 1.0) -
                             std::lgamma(static_cast<double>(i - k));
    const double mag = std::exp(log_front + log_binom - lam * x) * (lam * x + 1.0) / (lam * lam);
    const double term = ((i - 1 - k) % 2 == 0) ? mag : -mag;
    sum += term;
    max_term = std::max(max_term, mag);
  }
  const double cond = sum == 0.0 ? std::numeric_limits<double>::infinity() : max_term / std::fabs(sum);
  return {sum, cond};
}

inline double dhra_tail_quadrature(const OrderStatSpec& s, double x, double tol = 1e-13) {
  return upper_partial_mean({Reference::Exponential, s}, x, tol);
}

/// E[V; V > x]: binomial series when its condition estimate is below 1e8,
/// quadrature otherwise.
inline double dhra_tail(const OrderStatSpec& s, double x) {
  if (std::isinf(x)) return 0.0;
  const auto sv = dhra_tail_series(s, x);
  if (sv.condition < 1e8) return sv.value;
  return dhra_tail_quadrature(s, x);
}

/// Difference of the two exponential-frame partial means at x >= 0.
inline double z_dhra(const OrderStatSpec& a, const OrderStatSpec& b, double x) {
  if (!(x >= 0.0)) throw std::domain_error("z_dhra: x must be nonnegative");
  if (a == b) return 0.0;
  return dhra_tail(a, x) - dhra_tail(b, x);
}

inline double z_dhra_quadrature(const OrderStatSpec& a, const OrderStatSpec& b, double x) {
  return dhra_tail_quadrature(a, x) - dhra_tail_quadrature(b, x);
}

inline double z_dhra_series(const OrderStatSpec& a, const OrderStatSpec& b, double x) {
  return dhra_tail_series(a, x).value - dhra_tail_series(b, x).value;
}

namespace detail {

// E[V; V > -log(1 - u_k)] on a uniform u-grid, accumulated cell by cell from
// u = 1 downwards.
inline std::vector<double> dhra_tail_on_grid(const OrderStatSpec& s, int N) {
  std::vector<double> tails(static_cast<std::size_t>(N) + 1, 0.0);
  auto f = [&](double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    return -std::log1p(-u) * beta_orderstat_pdf(s, u);
  };
  QuadratureOptions q;
  q.abs_tol = 1e-15;
  double acc = 0.0;
  for (int k = N - 1; k >= 0; --k) {
    const double lo = static_cast<double>(k) / N;
    const double hi = static_cast<double>(k + 1) / N;
    acc += integrate(f, lo, hi, q).value;
    tails[k] = acc;
  }
  return tails;
}

}  // namespace detail

/// Detailed DHRA check of X_{i:n} >=_ss X_{j:m}; candidate points are mapped
/// from the beta frame by x = -log(1 - u).
inline SsReport check_ss_dhra_report(const OrderStatSpec& a, const OrderStatSpec& b,
                                     const SsOptions& opts = {}) {
  if (a == b) {
    SsReport rep{a, b, RootSet{{}, {}, RootRegime::Monotone, 0, 0, 1, {}, {}, 0}};
    rep.candidates = {{0.0, 0.0, "endpoint"}, {1.0, 0.0, "endpoint"}};
    rep.verdict = {StochasticOrder::SS, VerdictStatus::Holds, 0.0, 0.0,
                   "identical order statistics (Z == 0)", ""};
    return rep;
  }
  const auto cc = critical_constants(a, b);
  SsReport rep{a, b, solve_T(cc.exponent_a, cc.exponent_b, cc.primary)};
  rep.candidates = {{0.0, 0.0, "endpoint"}, {1.0, 0.0, "endpoint"}};
  detail::collect_roots(rep.candidates, rep.primary_roots, "critical");
  auto z = [&](double u) {
    if (u >= 1.0) return 0.0;
    return z_dhra(a, b, -std::log1p(-u));
  };
  auto scan = [&] {
    const int N = opts.grid_points;
    const auto ta = detail::dhra_tail_on_grid(a, N);
    const auto tb = detail::dhra_tail_on_grid(b, N);
    detail::GridScan best{ta[0] - tb[0], 0.0};
    int arg = 0;
    for (int k = 1; k <= N; ++k) {
      const double v = ta[k] - tb[k];
      if (v < best.min) {
        best = {v, static_cast<double>(k) / N};
        arg = k;
      }
    }
    const double lo = std::max(0.0, static_cast<double>(arg - 1) / N);
    const double hi = std::min(1.0, static_cast<double>(arg + 1) / N);
    const int steps = 2 * opts.refine_factor;
    for (int r = 1; r < steps; ++r) {
      const double u = lo + (hi - lo) * r / steps;
      const double v = z(u);
      if (v < best.min) best = {v, u};
    }
    return best;
  };
  return detail::finish_report(std::move(rep), z, scan, "DHRA", opts);
}

inline OrderVerdict check_ss_dhra(const OrderStatSpec& a, const OrderStatSpec& b,
                                  const SsOptions& opts = {}) {
  return check_ss_dhra_report(a, b, opts).verdict;
}

// ---------------------------------------------------------------------------
// (i, j) lattice comparability map

enum class SsFrame { DDA, DHRA };

inline std::string_view to_string(SsFrame f) { return f == SsFrame::DDA ? "DDA" : "DHRA"; }

enum class CellClass { HoldsSS_ij, HoldsSS_ji, HoldsSS_both, NoComparability, NeedsCheck_Pass, NeedsCheck_Fail };

inline std::string_view to_string(CellClass c) {
  switch (c) {
    case CellClass::HoldsSS_ij: return "HoldsSS_ij";
    case CellClass::HoldsSS_ji: return "HoldsSS_ji";
    case CellClass::HoldsSS_both: return "HoldsSS_both";
    case CellClass::NoComparability: return "NoComparability";
    case CellClass::NeedsCheck_Pass: return "NeedsCheck_Pass";
    case CellClass::NeedsCheck_Fail: return "NeedsCheck_Fail";
  }
  return "?";
}

struct RegionCell {
  int i;
  int j;
  CellClass cls;
};

struct RegionMap {
  SsFrame frame;
  int n;
  int m;
  std::vector<RegionCell> cells;  ///< row-major in i, then j

  CellClass at(int i, int j) const {
    return cells.at(static_cast<std::size_t>(i - 1) * m + (j - 1)).cls;
  }
};

/// Sign of E G^{-1}(B_{i:n}) - E G^{-1}(B_{j:m}) = Z(0) in the frame's reference.
inline int z0_sign(SsFrame frame, const OrderStatSpec& a, const OrderStatSpec& b) {
  if (frame == SsFrame::DDA) {
    const long lhs = static_cast<long>(a.i()) * (b.n() + 1);
    const long rhs = static_cast<long>(b.i()) * (a.n() + 1);
    return (lhs > rhs) - (lhs < rhs);
  }
  const double l = harmonic_sum(a.n() - a.i() + 1, a.n());
  const double r = harmonic_sum(b.n() - b.i() + 1, b.n());
  if (detail::geq_with_ties(l, r) && detail::geq_with_ties(r, l)) return 0;
  return l > r ? 1 : -1;
}

/// Classification of a single (i, j) cell.
///
/// B_{i:n} >=_st B_{j:m} iff i >= j and n - i <= m - j; the usual order implies
/// the star-shaped one in both frames because -log(1 - u) is increasing.
/// Z(0) < 0 rules out comparability; the rest needs the Z criterion.
inline CellClass classify_cell(SsFrame frame, int n, int m, int i, int j,
                               const SsOptions& opts = {}) {
  if (i == j && n == m) return CellClass::HoldsSS_both;
  if (i >= j && n - i <= m - j) return CellClass::HoldsSS_ij;
  if (i <= j && n - i >= m - j) return CellClass::HoldsSS_ji;
  const OrderStatSpec a(i, n), b(j, m);
  if (z0_sign(frame, a, b) < 0) return CellClass::NoComparability;
  const auto v = frame == SsFrame::DDA ? check_ss_dda(a, b, opts) : check_ss_dhra(a, b, opts);
  return v.holds() ? CellClass::NeedsCheck_Pass : CellClass::NeedsCheck_Fail;
}

/// Classifies every (i, j) in [1, n] x [1, m]; cells are evaluated on a small
/// thread pool and stored by index, so the result is deterministic.
inline RegionMap region_map(SsFrame frame, int n, int m, const SsOptions& opts = {}) {
  if (n < 1 || m < 1) throw std::domain_error("region_map: n and m must be positive");
  if (n > m) throw std::domain_error("region_map: requires n <= m");
  RegionMap out{frame, n, m, {}};
  out.cells.resize(static_cast<std::size_t>(n) * m);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t idx = next++; idx < out.cells.size(); idx = next++) {
      const int i = static_cast<int>(idx / m) + 1;
      const int j = static_cast<int>(idx % m) + 1;
      out.cells[idx] = {i, j, classify_cell(frame, n, m, i, j, opts)};
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned threads = std::min<unsigned>(hw, 16);
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

/// CSV with columns i, j, class; rows in (i, j) order.
inline std::string region_map_csv(const RegionMap& r) {
  std::string out = "i,j,class\n";
  for (const auto& c : r.cells) {
    out += std::to_string(c.i) + "," + std::to_string(c.j) + "," + std::string(to_string(c.cls)) + "\n";
  }
  return out;
}

inline RegionMap region_map_dda(int n, int m, const SsOptions& opts = {}) {
  return region_map(SsFrame::DDA, n, m, opts);
}

inline RegionMap region_map_dhra(int n, int m, const SsOptions& opts = {}) {
  return region_map(SsFrame::DHRA, n, m, opts);
}

}  // namespace osorder
