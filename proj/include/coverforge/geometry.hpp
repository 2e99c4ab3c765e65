#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "coverforge/rational.hpp"

namespace coverforge {

using Index = std::vector<long>;

struct Interval {
  Extended lo;
  Extended hi;

  bool contains(const Rational& x) const { return lo < Extended(x) && Extended(x) < hi; }
  bool bounded() const { return lo.finite() && hi.finite(); }
  friend bool operator==(const Interval&, const Interval&) = default;
};

std::optional<Interval> intersect(const Interval& a, const Interval& b);

/// Open axis-aligned box, possibly unbounded. Never degenerate.
class Box {
 public:
  Box() = default;
  explicit Box(std::vector<Interval> axes);

  static Box whole(std::size_t dim);
  /// Convenience for tests and fixtures: {{lo, hi}, ...} with rational endpoints.
  static Box of(std::initializer_list<std::pair<Rational, Rational>> axes);

  std::size_t dim() const { return axes_.size(); }
  const Interval& operator[](std::size_t i) const { return axes_[i]; }
  const std::vector<Interval>& axes() const { return axes_; }

  bool contains(const Point& x) const;
  bool bounded() const;
  bool is_whole() const;
  Point center() const;  // bounded boxes only

  friend bool operator==(const Box&, const Box&) = default;

 private:
  std::vector<Interval> axes_;
};

std::optional<Box> intersect(const Box& a, const Box& b);
bool subset(const Box& a, const Box& b);

/// A point of `a` outside every box of `cover`, or nullopt if `a` is covered.
/// Open cells are visited before breakpoints, so gaps of positive width are
/// reported at a cell midpoint rather than at a boundary.
std::optional<Point> uncovered_point(const Box& a, const std::vector<Box>& cover);

/// First point of `a` not covered by `b`, exact.
std::optional<Point> union_difference_witness(const std::vector<Box>& a, const std::vector<Box>& b);

/// Largest r with B(x, r) inside the box; 0 outside. Infinite if the box is ℝⁿ.
Extended ball_radius_in(const Box& b, const Point& x);
// Largest |coordinate| over a bounded box's closure.
Rational max_abs_coord(const Box& b);

/// (lo + period·m[coord], hi + period·m[coord]); coord < 0 means fixed.
struct AxisConstraint {
  Extended lo;
  Extended hi;
  int coord = -1;
  Rational period = 0;

  Interval at(const Index& m) const;
  friend bool operator==(const AxisConstraint&, const AxisConstraint&) = default;
};

/// Boxes indexed by m ∈ ℤᵏ. Each axis carries a conjunction of constraints;
/// an empty list leaves the axis unconstrained.
class LatticeFamily {
 public:
  LatticeFamily() = default;
  LatticeFamily(std::size_t dim, std::size_t arity, std::vector<std::vector<AxisConstraint>> axes);

  /// One lattice coordinate translating a template box along one axis.
  static LatticeFamily slab(std::size_t dim, std::size_t axis, const Rational& lo, const Rational& hi,
                            const Rational& period);

  std::size_t dim() const { return dim_; }
  std::size_t arity() const { return arity_; }
  const std::vector<std::vector<AxisConstraint>>& axes() const { return axes_; }

  std::optional<Box> instance(const Index& m) const;
  /// Indices whose instance meets the bounded window, in lexicographic order.
  std::vector<Index> indices_meeting(const Box& window) const;
  /// Indices whose instance contains x.
  std::vector<Index> indices_containing(const Point& x) const;
  bool contains(const Point& x) const { return !indices_containing(x).empty(); }

  bool locally_finite() const;
  /// Every lattice coordinate has an axis whose period is at least the
  /// instance width, so distinct instances never meet.
  bool separated() const;

  friend bool operator==(const LatticeFamily&, const LatticeFamily&) = default;

 private:
  // Inclusive index range for coordinate c whose instances can meet (wlo, whi) on its axes.
  bool coord_range(std::size_t c, const Box& window, long& first, long& last) const;

  std::size_t dim_ = 0;
  std::size_t arity_ = 0;
  std::vector<std::vector<AxisConstraint>> axes_;
};

LatticeFamily intersect(const LatticeFamily& f, const Box& b);
/// Set intersection. Coordinates paired through equal periods on a shared
/// axis are eliminated, so the slab families stay single-coordinate.
std::vector<LatticeFamily> intersect(const LatticeFamily& a, const LatticeFamily& b);

/// Instances meeting the window, clipped to it.
std::vector<Box> clip_to_window(const LatticeFamily& f, const Box& window);

}  // namespace coverforge
