#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature on finite and
// half-infinite intervals.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

namespace osorder {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  std::size_t max_subdivisions = std::size_t{1} << 16;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk15(F& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (std::size_t k = 0; k < 7; ++k) {
    const double dx = half * kKronrodNodes[k];
    const double pair = f(centre - dx) + f(centre + dx);
    kronrod += kKronrodWeights[k] * pair;
    if (k % 2 == 1) gauss += kGaussWeights[k / 2] * pair;
  }
  return {a, b, kronrod * half, std::fabs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Integrates f over [a, b]. The integrand is never evaluated at the endpoints,
/// so integrable endpoint singularities are tolerated.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureOptions& opts = {}) {
  QuadratureResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  const double sign = a < b ? 1.0 : -1.0;
  if (a > b) std::swap(a, b);

  std::priority_queue<detail::Segment> heap;
  auto first = detail::gk15(f, a, b);
  out.evaluations = 15;
  double total = first.value;
  double total_err = first.error;
  heap.push(first);

  // Running totals drift after many updates; recompute them periodically.
  std::size_t since_resum = 0;
  while (heap.size() < opts.max_subdivisions) {
    const double tol = std::max(opts.abs_tol, opts.rel_tol * std::fabs(total));
    if (total_err <= tol) {
      out.converged = true;
      break;
    }
    auto worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // cannot split further
    heap.pop();
    auto left = detail::gk15(f, worst.a, mid);
    auto right = detail::gk15(f, mid, worst.b);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    if (++since_resum == 256) {
      since_resum = 0;
      auto copy = heap;
      total = 0.0;
      total_err = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        total_err += copy.top().error;
        copy.pop();
      }
    }
  }
  if (!out.converged) {
    const double tol = std::max(opts.abs_tol, opts.rel_tol * std::fabs(total));
    out.converged = total_err <= tol;
  }
  // Final sum over segments, smallest first.
  std::vector<detail::Segment> segs;
  segs.reserve(heap.size());
  while (!heap.empty()) {
    segs.push_back(heap.top());
    heap.pop();
  }
  double value = 0.0;
  double err = 0.0;
  for (auto it = segs.rbegin(); it != segs.rend(); ++it) {
    value += it->value;
    err += it->error;
  }
  out.value = sign * value;
  out.abs_error = err;
  return out;
}

/// Integrates f over [a, +inf) via the map t = a + s / (1 - s), s in [0, 1).
template <class F>
QuadratureResult integrate_to_infinity(F&& f, double a, const QuadratureOptions& opts = {}) {
  auto mapped = [&](double s) {
    const double one_minus = 1.0 - s;
    const double t = a + s / one_minus;
    const double v = f(t);
    if (v == 0.0) return 0.0;
    return v / (one_minus * one_minus);
  };
  return integrate(mapped, 0.0, 1.0, opts);
}

}  // namespace osorder
