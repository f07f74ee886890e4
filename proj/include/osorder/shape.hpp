#pragma once

// Catalog of nonparametric shape classes. Each class is the set of parents F
// related to a reference G by a transform order with generator class H:
// F in F_H^G  <=>  F^{-1} o G in H.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "osorder/refdist.hpp"

namespace osorder {

enum class ShapeName { DD, ID, DDA, IHR, DHR, DHRA, DRHR, IOR, DOR, ILOR, DLOR, DROR };

/// Generator class H of the transform order.
enum class Transform { Convex, Concave, StarShaped, AntiStarShaped };

/// Which side of P(X <= E X_{i:n}) a class bounds through p_{i:n}^G.
enum class BoundDirection { UpperBound, LowerBound };

struct ShapeClass {
  ShapeName name;
  Transform transform;
  Reference reference;

  friend bool operator==(const ShapeClass&, const ShapeClass&) = default;
};

inline constexpr std::array<ShapeClass, 12> kShapeCatalog = {{
    {ShapeName::DD, Transform::Convex, Reference::Uniform},
    {ShapeName::ID, Transform::Concave, Reference::Uniform},
    {ShapeName::DDA, Transform::StarShaped, Reference::Uniform},
    {ShapeName::IHR, Transform::Concave, Reference::Exponential},
    {ShapeName::DHR, Transform::Convex, Reference::Exponential},
    {ShapeName::DHRA, Transform::StarShaped, Reference::Exponential},
    {ShapeName::DRHR, Transform::Convex, Reference::NegExponential},
    {ShapeName::IOR, Transform::Concave, Reference::LogLogistic1},
    {ShapeName::DOR, Transform::Convex, Reference::LogLogistic1},
    {ShapeName::ILOR, Transform::Concave, Reference::Logistic},
    {ShapeName::DLOR, Transform::Convex, Reference::Logistic},
    // Generated by the negative LL1 reference.
    {ShapeName::DROR, Transform::Convex, Reference::NegLogLogistic1},
}};

inline std::string_view to_string(ShapeName n) {
  switch (n) {
    case ShapeName::DD: return "DD";
    case ShapeName::ID: return "ID";
    case ShapeName::DDA: return "DDA";
    case ShapeName::IHR: return "IHR";
    case ShapeName::DHR: return "DHR";
    case ShapeName::DHRA: return "DHRA";
    case ShapeName::DRHR: return "DRHR";
    case ShapeName::IOR: return "IOR";
    case ShapeName::DOR: return "DOR";
    case ShapeName::ILOR: return "ILOR";
    case ShapeName::DLOR: return "DLOR";
    case ShapeName::DROR: return "DROR";
  }
  return "?";
}

inline std::string_view to_string(Transform t) {
  switch (t) {
    case Transform::Convex: return "convex";
    case Transform::Concave: return "concave";
    case Transform::StarShaped: return "star-shaped";
    case Transform::AntiStarShaped: return "anti-star-shaped";
  }
  return "?";
}

inline std::string_view to_string(BoundDirection d) {
  return d == BoundDirection::UpperBound ? "upper" : "lower";
}

inline const ShapeClass& shape_class(ShapeName n) {
  for (const auto& c : kShapeCatalog) {
    if (c.name == n) return c;
  }
  throw std::logic_error("shape class missing from catalog");
}

inline const ShapeClass& parse_shape_class(std::string_view s) {
  for (const auto& c : kShapeCatalog) {
    if (s == to_string(c.name)) return c;
  }
  throw std::invalid_argument("unknown shape class '" + std::string(s) + "'");
}

/// Concave generator (F^{-1} o G concave, G^{-1} o F convex): Jensen gives an
/// upper bound on P(X <= E X_{i:n}); convex generator gives a lower bound.
/// Star-ordered classes carry no such bound.
inline std::optional<BoundDirection> bound_direction(const ShapeClass& c) {
  switch (c.transform) {
    case Transform::Concave: return BoundDirection::UpperBound;
    case Transform::Convex: return BoundDirection::LowerBound;
    default: return std::nullopt;
  }
}

}  // namespace osorder
