#pragma once

// Closed-form sufficient conditions for X_{i:n} >=_icv X_{j:m} and
// X_{i:n} >=_icx X_{j:m} under convex-ordered shape classes, and the
// specialisations comparing E X_{i:n} with the parent mean.
//
// The conditions are one-directional: a violated condition yields
// Undetermined, never a negative verdict.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

#include "osorder/refdist.hpp"
#include "osorder/shape.hpp"
#include "osorder/specfun.hpp"

namespace osorder {

enum class StochasticOrder { ST, ICV, ICX, SS };

enum class VerdictStatus { Holds, Undetermined };

inline std::string_view to_string(StochasticOrder o) {
  switch (o) {
    case StochasticOrder::ST: return "st";
    case StochasticOrder::ICV: return "icv";
    case StochasticOrder::ICX: return "icx";
    case StochasticOrder::SS: return "ss";
  }
  return "?";
}

inline StochasticOrder parse_order(std::string_view s) {
  if (s == "st") return StochasticOrder::ST;
  if (s == "icv") return StochasticOrder::ICV;
  if (s == "icx") return StochasticOrder::ICX;
  if (s == "ss") return StochasticOrder::SS;
  throw std::invalid_argument("unknown order '" + std::string(s) + "'");
}

inline std::string_view to_string(VerdictStatus s) {
  return s == VerdictStatus::Holds ? "Holds" : "Undetermined";
}

/// Outcome of a comparison of X_{i:n} (lhs) against X_{j:m} (rhs).
struct OrderVerdict {
  StochasticOrder order;
  VerdictStatus status;
  double lhs_witness;
  double rhs_witness;
  std::string condition_name;
  std::string note;

  bool holds() const noexcept { return status == VerdictStatus::Holds; }
};

/// Class outside the catalog supported by a given check.
class unsupported_class : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Inputs on which a closed-form condition is undefined.
class boundary_case : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace detail {

// Ties count as satisfied; the relative slack absorbs rounding in sums that
// are mathematically equal.
inline bool geq_with_ties(double lhs, double rhs) {
  if (lhs >= rhs) return true;
  if (std::isinf(lhs) || std::isinf(rhs)) return false;
  return rhs - lhs <= 1e-12 * std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
}

// psi(p) - psi(q) for positive integers, through the recurrence
// psi(k + 1) = psi(k) + 1/k, so that it is exact up to summation rounding.
inline double digamma_difference(int p, int q) {
  if (p == q) return 0.0;
  if (p > q) return harmonic_sum(q, p - 1);
  return -harmonic_sum(p, q - 1);
}

struct Sides {
  double lhs;
  double rhs;
  bool satisfied;
  std::string text;
};

// Class condition for the pair (a, b), rank precondition excluded.
inline Sides class_condition(ShapeName name, const OrderStatSpec& a, const OrderStatSpec& b) {
  const long i = a.i(), n = a.n(), j = b.i(), m = b.n();
  switch (name) {
    case ShapeName::ID:
    case ShapeName::DD:
      return {static_cast<double>(i) / (n + 1), static_cast<double>(j) / (m + 1),
              i * (m + 1) >= j * (n + 1), "i/(n+1) >= j/(m+1)"};
    case ShapeName::IHR:
    case ShapeName::DHR: {
      const double l = harmonic_sum(n - i + 1, n);
      const double r = harmonic_sum(m - j + 1, m);
      return {l, r, geq_with_ties(l, r), "sum_{k=n-i+1}^{n} 1/k >= sum_{k=m-j+1}^{m} 1/k"};
    }
    case ShapeName::IOR:
    case ShapeName::DOR:
      return {static_cast<double>(i) / n, static_cast<double>(j) / m, i * m >= j * n,
              "i/n >= j/m"};
    case ShapeName::ILOR:
    case ShapeName::DLOR: {
      const double l = digamma_difference(a.i(), a.n() - a.i() + 1);
      const double r = digamma_difference(b.i(), b.n() - b.i() + 1);
      return {l, r, geq_with_ties(l, r), "psi(i)-psi(n-i+1) >= psi(j)-psi(m-j+1)"};
    }
    case ShapeName::DRHR: {
      const double l = harmonic_sum(i, n);
      const double r = harmonic_sum(j, m);
      return {l, r, geq_with_ties(r, l), "sum_{k=i}^{n} 1/k <= sum_{k=j}^{m} 1/k"};
    }
    case ShapeName::DROR: {
      // E[G^{-1}(B_{i:n})] = -(n - i + 1)/(i - 1) for the negative LL1
      // reference; the mean comparison reduces to n/(i-1) <= m/(j-1).
      if (i == 1 && j == 1) {
        throw boundary_case(
            "DROR: both ranks equal 1, where the negative-LL1 means diverge; "
            "use the oracle probe instead");
      }
      constexpr double inf = std::numeric_limits<double>::infinity();
      const double l = i == 1 ? inf : static_cast<double>(n) / (i - 1);
      const double r = j == 1 ? inf : static_cast<double>(m) / (j - 1);
      const bool ok = i == 1 ? false : (j == 1 ? true : n * (j - 1) <= m * (i - 1));
      return {l, r, ok, "n/(i-1) <= m/(j-1)"};
    }
    default: break;
  }
  throw unsupported_class("no closed-form ICV/ICX condition for class " +
                          std::string(to_string(name)));
}

inline OrderVerdict identical_verdict(StochasticOrder order) {
  return {order, VerdictStatus::Holds, 0.0, 0.0, "identical order statistics", ""};
}

}  // namespace detail

/// X_{i:n} >=_icv X_{j:m} for F in ID, IHR, IOR or ILOR (requires i >= j).
inline OrderVerdict check_icv(const ShapeClass& shape, const OrderStatSpec& a, const OrderStatSpec& b) {
  switch (shape.name) {
    case ShapeName::ID:
    case ShapeName::IHR:
    case ShapeName::IOR:
    case ShapeName::ILOR: break;
    default:
      throw unsupported_class("ICV check is not available for class " +
                              std::string(to_string(shape.name)));
  }
  if (a == b) return detail::identical_verdict(StochasticOrder::ICV);
  auto sides = detail::class_condition(shape.name, a, b);
  OrderVerdict v{StochasticOrder::ICV, VerdictStatus::Undetermined, sides.lhs, sides.rhs,
                 std::string(to_string(shape.name)) + ": " + sides.text, ""};
  if (a.i() < b.i()) {
    v.note = "rank precondition i >= j not met";
  } else if (sides.satisfied) {
    v.status = VerdictStatus::Holds;
  } else {
    v.note = "class condition not met";
  }
  return v;
}

/// X_{i:n} >=_icx X_{j:m} for F in DD, DHR, DOR, DLOR, DRHR or DROR (requires i <= j).
inline OrderVerdict check_icx(const ShapeClass& shape, const OrderStatSpec& a, const OrderStatSpec& b) {
  switch (shape.name) {
    case ShapeName::DD:
    case ShapeName::DHR:
    case ShapeName::DOR:
    case ShapeName::DLOR:
    case ShapeName::DRHR:
    case ShapeName::DROR: break;
    default:
      throw unsupported_class("ICX check is not available for class " +
                              std::string(to_string(shape.name)));
  }
  if (a == b) return detail::identical_verdict(StochasticOrder::ICX);
  auto sides = detail::class_condition(shape.name, a, b);
  OrderVerdict v{StochasticOrder::ICX, VerdictStatus::Undetermined, sides.lhs, sides.rhs,
                 std::string(to_string(shape.name)) + ": " + sides.text, ""};
  if (a.i() > b.i()) {
    v.note = "rank precondition i <= j not met";
  } else if (sides.satisfied) {
    v.status = VerdictStatus::Holds;
  } else {
    v.note = "class condition not met";
  }
  return v;
}

/// E X_{i:n} >= mu for F in ID, ILOR or IHR: check_icv against X_{1:1}.
inline OrderVerdict check_mean_dominated_by_orderstat(const ShapeClass& shape, const OrderStatSpec& s) {
  switch (shape.name) {
    case ShapeName::ID:
    case ShapeName::ILOR:
    case ShapeName::IHR: break;
    default:
      throw unsupported_class("mean-vs-order-statistic check (E X_{i:n} >= mu) is not available for " +
                              std::string(to_string(shape.name)));
  }
  return check_icv(shape, s, OrderStatSpec(1, 1));
}

/// E X_{j:m} <= mu for F in DD, DLOR, DHR or DRHR: check_icx with X_{1:1} on the left.
inline OrderVerdict check_mean_dominates_orderstat(const ShapeClass& shape, const OrderStatSpec& s) {
  switch (shape.name) {
    case ShapeName::DD:
    case ShapeName::DLOR:
    case ShapeName::DHR:
    case ShapeName::DRHR: break;
    default:
      throw unsupported_class("mean-vs-order-statistic check (E X_{j:m} <= mu) is not available for " +
                              std::string(to_string(shape.name)));
  }
  return check_icx(shape, OrderStatSpec(1, 1), s);
}

}  // namespace osorder
