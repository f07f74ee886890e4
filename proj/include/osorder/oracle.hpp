#pragma once

// Numerical ground truth for orders between W_a = G^{-1}(B_{i:n}) and
// W_b = G^{-1}(B_{j:m}).
//
// Probes evaluate the characterising functionals on a grid:
//   ST:  F_a(x) <= F_b(x)
//   SS:  E[W_a; W_a > x] >= E[W_b; W_b > x]   (nonnegative references only)
//   ICX: E(W_a - t)_+ >= E(W_b - t)_+
//   ICV: E min(W_a, t) >= E min(W_b, t)
// A probe can only falsify an order, never prove it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "osorder/conditions.hpp"
#include "osorder/orderstat.hpp"
#include "osorder/refdist.hpp"

namespace osorder {

enum class ProbeVerdict { ConsistentWithHolds, ViolationFound };

inline std::string_view to_string(ProbeVerdict v) {
  return v == ProbeVerdict::ConsistentWithHolds ? "ConsistentWithHolds" : "ViolationFound";
}

struct OrderProbe {
  StochasticOrder order;
  std::vector<double> x_grid;
  std::vector<double> margins;  ///< lhs - rhs at each grid point
  double min_margin;
  double argmin;
  ProbeVerdict verdict;
};

struct ProbeOptions {
  double tolerance = 1e-9;         ///< ViolationFound iff min_margin < -tolerance
  double quadrature_tol = 1e-12;
};

namespace detail {

// Grid spanning the pooled 1e-4 .. 1 - 1e-4 quantiles of both variables.
inline std::vector<double> pooled_grid(const TransformedOrderStat& a, const TransformedOrderStat& b,
                                       int grid_size, bool include_zero) {
  if (grid_size < 50) throw std::domain_error("probe: grid_size must be at least 50");
  const double lo = std::min(quantile(a, 1e-4), quantile(b, 1e-4));
  const double hi = std::max(quantile(a, 1.0 - 1e-4), quantile(b, 1.0 - 1e-4));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(grid_size) + 1);
  if (include_zero && lo > 0.0) grid.push_back(0.0);
  for (int k = 0; k < grid_size; ++k) {
    grid.push_back(lo + (hi - lo) * k / (grid_size - 1));
  }
  return grid;
}

// lhs - rhs with +inf dominating everything; equal infinities compare as 0.
inline double margin(double lhs, double rhs) {
  if (std::isinf(lhs) && std::isinf(rhs) && (lhs > 0) == (rhs > 0)) return 0.0;
  return lhs - rhs;
}

template <class Functional>
OrderProbe run_probe(StochasticOrder order, std::vector<double> grid, Functional&& fn,
                     const ProbeOptions& opts) {
  OrderProbe p{order, std::move(grid), {}, std::numeric_limits<double>::infinity(), 0.0,
               ProbeVerdict::ConsistentWithHolds};
  p.margins.reserve(p.x_grid.size());
  for (double x : p.x_grid) {
    const double m = fn(x);
    p.margins.push_back(m);
    if (m < p.min_margin) {
      p.min_margin = m;
      p.argmin = x;
    }
  }
  if (p.min_margin < -opts.tolerance) p.verdict = ProbeVerdict::ViolationFound;
  return p;
}

}  // namespace detail

/// Star-shaped order via E[W; W > x] for x >= 0.
inline OrderProbe probe_ss(const TransformedOrderStat& a, const TransformedOrderStat& b, int grid_size,
                           const ProbeOptions& opts = {}) {
  if (!has_nonnegative_support(a.g) || !has_nonnegative_support(b.g)) {
    throw std::domain_error("probe_ss: the star-shaped order is probed only for nonnegative variables");
  }
  auto grid = detail::pooled_grid(a, b, grid_size, true);
  for (double& x : grid) x = std::max(0.0, x);
  auto fn = [&](double x) {
    return detail::margin(upper_partial_mean(a, x, opts.quadrature_tol),
                          upper_partial_mean(b, x, opts.quadrature_tol));
  };
  return detail::run_probe(StochasticOrder::SS, std::move(grid), fn, opts);
}

/// Increasing convex order via stop-loss transforms.
inline OrderProbe probe_icx(const TransformedOrderStat& a, const TransformedOrderStat& b, int grid_size,
                            const ProbeOptions& opts = {}) {
  auto fn = [&](double t) {
    return detail::margin(stop_loss(a, t, opts.quadrature_tol), stop_loss(b, t, opts.quadrature_tol));
  };
  return detail::run_probe(StochasticOrder::ICX, detail::pooled_grid(a, b, grid_size, false), fn, opts);
}

/// Increasing concave order via E min(W, t) = t - E(t - W)_+.
inline OrderProbe probe_icv(const TransformedOrderStat& a, const TransformedOrderStat& b, int grid_size,
                            const ProbeOptions& opts = {}) {
  auto fn = [&](double t) {
    // E min(W_a, t) - E min(W_b, t) = E(t - W_b)_+ - E(t - W_a)_+
    return detail::margin(lower_stop_loss(b, t, opts.quadrature_tol),
                          lower_stop_loss(a, t, opts.quadrature_tol));
  };
  return detail::run_probe(StochasticOrder::ICV, detail::pooled_grid(a, b, grid_size, false), fn, opts);
}

/// Usual stochastic order: F_b(x) - F_a(x) >= 0.
inline OrderProbe probe_st(const TransformedOrderStat& a, const TransformedOrderStat& b, int grid_size,
                           const ProbeOptions& opts = {}) {
  auto fn = [&](double x) { return cdf(b, x) - cdf(a, x); };
  return detail::run_probe(StochasticOrder::ST, detail::pooled_grid(a, b, grid_size, false), fn, opts);
}

inline OrderProbe probe(StochasticOrder order, const TransformedOrderStat& a, const TransformedOrderStat& b,
                        int grid_size, const ProbeOptions& opts = {}) {
  switch (order) {
    case StochasticOrder::ST: return probe_st(a, b, grid_size, opts);
    case StochasticOrder::ICV: return probe_icv(a, b, grid_size, opts);
    case StochasticOrder::ICX: return probe_icx(a, b, grid_size, opts);
    case StochasticOrder::SS: return probe_ss(a, b, grid_size, opts);
  }
  throw std::logic_error("unknown order");
}

// ---------------------------------------------------------------------------
// Monte Carlo with common random numbers

/// Star-shaped test functions on [0, inf): u(0) = 0 and u(x)/x nondecreasing.
struct StarShapedFn {
  enum class Kind { Power, Indicator, Ramp };
  Kind kind;
  double param;  ///< exponent p >= 1 for Power, threshold t >= 0 otherwise

  static StarShapedFn power(double p) {
    if (p < 1.0) throw std::domain_error("x^p is star-shaped only for p >= 1");
    return {Kind::Power, p};
  }
  /// x * 1[x >= t]
  static StarShapedFn indicator(double t) {
    if (t < 0.0) throw std::domain_error("threshold must be nonnegative");
    return {Kind::Indicator, t};
  }
  /// (x - t)_+
  static StarShapedFn ramp(double t) {
    if (t < 0.0) throw std::domain_error("threshold must be nonnegative");
    return {Kind::Ramp, t};
  }

  double operator()(double x) const {
    switch (kind) {
      case Kind::Power: return std::pow(x, param);
      case Kind::Indicator: return x >= param ? x : 0.0;
      case Kind::Ramp: return x > param ? x - param : 0.0;
    }
    return 0.0;
  }

  std::string label() const {
    switch (kind) {
      case Kind::Power: return "x^" + std::to_string(param);
      case Kind::Indicator: return "x*1[x>=" + std::to_string(param) + "]";
      case Kind::Ramp: return "(x-" + std::to_string(param) + ")_+";
    }
    return "?";
  }
};

/// The default finite star-shaped family: powers {1, 1.5, 2, 3} plus
/// indicator and ramp functions at the given thresholds.
inline std::vector<StarShapedFn> default_star_family(const std::vector<double>& thresholds) {
  std::vector<StarShapedFn> fns = {StarShapedFn::power(1.0), StarShapedFn::power(1.5),
                                   StarShapedFn::power(2.0), StarShapedFn::power(3.0)};
  for (double t : thresholds) {
    fns.push_back(StarShapedFn::indicator(t));
    fns.push_back(StarShapedFn::ramp(t));
  }
  return fns;
}

struct McEstimate {
  double lhs;
  double rhs;
  double se_lhs;
  double se_rhs;
  double se_diff;  ///< standard error of lhs - rhs under common random numbers
  bool flagged;    ///< running-mean instability (heavy tail) or non-finite values
};

/// SplitMix64 step; used to derive per-batch seeds from one 64-bit seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace detail {

struct Moments {
  std::vector<double> sum_a, sum_b, sq_a, sq_b, sq_d;
  std::vector<double> half_a;  ///< sum over the first half of the batch
  std::vector<double> max_abs; ///< largest |u| seen on either side
  std::size_t count = 0;
  bool non_finite = false;
};

// Pairwise (tree) reduction of per-batch partial sums, independent of the
// order in which batches finished.
inline double pairwise_sum(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return v[lo];
  if (hi == lo) return 0.0;
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

}  // namespace detail

/// Paired Monte Carlo estimates of E u(W_a) and E u(W_b) for each u in `fns`.
/// The same uniform draw feeds both quantile transforms. Results depend only on
/// (inputs, samples, seed).
inline std::vector<McEstimate> mc_expect_starshaped(const TransformedOrderStat& a,
                                                    const TransformedOrderStat& b,
                                                    const std::vector<StarShapedFn>& fns,
                                                    std::size_t samples, std::uint64_t seed,
                                                    std::size_t batches = 8) {
  if (samples < 100000) throw std::domain_error("mc_expect_starshaped: need at least 1e5 samples");
  if (!has_nonnegative_support(a.g) || !has_nonnegative_support(b.g)) {
    throw std::domain_error("mc_expect_starshaped: star-shaped functions need nonnegative variables");
  }
  const std::size_t F = fns.size();
  auto run_batch = [&](std::size_t batch, std::size_t count) {
    detail::Moments mo;
    mo.sum_a.assign(F, 0.0);
    mo.sum_b.assign(F, 0.0);
    mo.sq_a.assign(F, 0.0);
    mo.sq_b.assign(F, 0.0);
    mo.sq_d.assign(F, 0.0);
    mo.half_a.assign(F, 0.0);
    mo.max_abs.assign(F, 0.0);
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(batch)));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t k = 0; k < count; ++k) {
      double p = unif(rng);
      if (p <= 0.0) p = std::numeric_limits<double>::min();
      const double wa = quantile(a, p);
      const double wb = quantile(b, p);
      for (std::size_t f = 0; f < F; ++f) {
        const double ua = fns[f](wa);
        const double ub = fns[f](wb);
        if (!std::isfinite(ua) || !std::isfinite(ub)) mo.non_finite = true;
        mo.sum_a[f] += ua;
        mo.sum_b[f] += ub;
        mo.sq_a[f] += ua * ua;
        mo.sq_b[f] += ub * ub;
        mo.sq_d[f] += (ua - ub) * (ua - ub);
        if (k < count / 2) mo.half_a[f] += ua;
        mo.max_abs[f] = std::max({mo.max_abs[f], std::fabs(ua), std::fabs(ub)});
      }
    }
    mo.count = count;
    return mo;
  };

  batches = std::max<std::size_t>(1, std::min(batches, samples));
  std::vector<std::future<detail::Moments>> futs;
  for (std::size_t bi = 0; bi < batches; ++bi) {
    const std::size_t count = samples / batches + (bi < samples % batches ? 1 : 0);
    futs.push_back(std::async(std::launch::async, run_batch, bi, count));
  }
  std::vector<detail::Moments> parts;
  for (auto& f : futs) parts.push_back(f.get());

  std::vector<McEstimate> out;
  const double N = static_cast<double>(samples);
  for (std::size_t f = 0; f < F; ++f) {
    auto gather = [&](auto member) {
      std::vector<double> v;
      for (const auto& p : parts) v.push_back((p.*member)[f]);
      return detail::pairwise_sum(v, 0, v.size());
    };
    const double sa = gather(&detail::Moments::sum_a);
    const double sb = gather(&detail::Moments::sum_b);
    const double qa = gather(&detail::Moments::sq_a);
    const double qb = gather(&detail::Moments::sq_b);
    const double qd = gather(&detail::Moments::sq_d);
    const double ma = sa / N, mb = sb / N, md = ma - mb;
    const double va = std::max(0.0, qa / N - ma * ma);
    const double vb = std::max(0.0, qb / N - mb * mb);
    const double vd = std::max(0.0, qd / N - md * md);
    McEstimate e{ma, mb, std::sqrt(va / N), std::sqrt(vb / N), std::sqrt(vd / N), false};

    // Compare the first-half and second-half means of every batch, pooled.
    double first = 0.0, first_n = 0.0;
    for (const auto& p : parts) {
      first += p.half_a[f];
      first_n += static_cast<double>(p.count / 2);
    }
    const double second = sa - first;
    const double second_n = N - first_n;
    const double diff = first / first_n - second / second_n;
    const double se_split = std::sqrt(va / first_n + va / second_n);
    bool flag = false;
    for (const auto& p : parts) flag = flag || p.non_finite;
    if (se_split > 0.0 && std::fabs(diff) > 6.0 * se_split) flag = true;
    // A single draw moving the running mean by more than 1% marks a tail too
    // heavy for the sample size.
    double max_abs = 0.0;
    for (const auto& p : parts) max_abs = std::max(max_abs, p.max_abs[f]);
    const double scale = std::max(std::fabs(sa), std::fabs(sb));
    if (scale > 0.0 && max_abs > 0.01 * scale) flag = true;
    e.flagged = flag;
    out.push_back(e);
  }
  return out;
}

}  // namespace osorder
