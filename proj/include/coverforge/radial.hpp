#pragma once

#include "coverforge/pl_function.hpp"

namespace coverforge {

/// v ↦ dilation · b(‖v‖) · v with b positive and nondecreasing, so the radius
/// map r ↦ dilation · r · b(r) is strictly increasing.
struct RadialMap {
  std::size_t dim = 0;
  PLFunction b;
  Rational dilation = 1;

  Rational radius(const Rational& r) const { return dilation * r * b(r); }
  /// Largest dyadic r (resolution 2^-bits) with radius(r) <= t.
  Rational inverse_radius_lower(const Rational& t, unsigned bits = 60) const;
  /// Smallest dyadic r with radius(r) >= t.
  Rational inverse_radius_upper(const Rational& t, unsigned bits = 60) const;
  /// Exact PL check that b is positive and nondecreasing.
  bool monotone() const;

  friend bool operator==(const RadialMap&, const RadialMap&) = default;
};

}  // namespace coverforge
