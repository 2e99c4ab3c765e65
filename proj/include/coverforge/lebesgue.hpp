#pragma once

#include <optional>
#include <vector>

#include "coverforge/cover.hpp"
#include "coverforge/radial.hpp"

namespace coverforge {

/// Largest r <= 1 such that B(x, r) lies inside one box of one element
/// (schema instances included); 0 if none. Field elements are unsupported.
Rational inscribed_radius(const Cover& c, const Point& x);

/// Nonincreasing PL lower bound of d ↦ min_{‖x‖<=d} inscribed_radius(x) on
/// [0, d_max] from a grid of step delta; constant beyond. Throws CoverageGap
/// when the corrected radius is not positive at some grid center.
PLFunction lebesgue_profile(const Cover& c, const Rational& d_max, const Rational& delta);

struct Rescaler {
  std::size_t dim = 0;
  PLFunction profile;
  Rational fixed_point;  // y = profile(y)
  PLFunction b;          // nondecreasing, b(0) >= 1 + 1/profile(y)

  RadialMap map(const Rational& dilation = 1) const { return RadialMap{dim, b, dilation}; }
};

Rescaler build_rescaler(const PLFunction& profile, std::size_t dim);

/// Radius bound R: every u with ‖map(u) - map(x)‖ <= t satisfies ‖u - x‖ <= R,
/// given a lower bound on ‖x‖.
Rational preimage_radius(const RadialMap& map, const Rational& norm_lower, const Rational& t);

struct LebesgueReport {
  std::size_t checked = 0;
  std::size_t failed = 0;
  std::optional<Point> witness;
  bool ok() const { return failed == 0; }
};

/// At each sample x: the preimage of the unit ball around map(x) lies in a
/// single element, via B(x, R) ⊂ element.
LebesgueReport verify_lebesgue(const Cover& c, const RadialMap& map, const std::vector<Point>& samples);

/// Identity defect |s^-1(s(r)) - r| <= 2^-40 at the given radii, and exact
/// monotonicity of r ↦ r b(r).
bool check_radial_inverse(const RadialMap& map, const std::vector<Rational>& radii);

}  // namespace coverforge
