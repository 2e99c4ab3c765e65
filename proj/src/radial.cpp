#include "coverforge/radial.hpp"

namespace coverforge {

namespace {

// Bisection on [0, hi] for the boundary of radius(r) <= t.
std::pair<Rational, Rational> bracket(const RadialMap& m, const Rational& t, unsigned bits) {
  Rational lo = 0, hi = 1;
  while (m.radius(hi) < t) hi *= 2;
  const Rational eps = pow2(-static_cast<long>(bits));
  while (hi - lo > eps) {
    Rational mid = (lo + hi) / 2;
    if (m.radius(mid) <= t)
      lo = mid;
    else
      hi = mid;
  }
  return {lo, hi};
}

}  // namespace

Rational RadialMap::inverse_radius_lower(const Rational& t, unsigned bits) const {
  if (t <= 0) return 0;
  return bracket(*this, t, bits).first;
}

Rational RadialMap::inverse_radius_upper(const Rational& t, unsigned bits) const {
  if (t <= 0) return 0;
  auto [lo, hi] = bracket(*this, t, bits);
  return radius(lo) == t ? lo : hi;
}

bool RadialMap::monotone() const { return dilation > 0 && b.nondecreasing() && b.min_value() > 0; }

}  // namespace coverforge
