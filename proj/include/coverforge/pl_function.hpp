#pragma once

#include <vector>

#include "coverforge/rational.hpp"

namespace coverforge {

/// Continuous piecewise-linear function on ℝ through (xs[k], ys[k]). Constant
/// to the left of the first breakpoint; constant or linear (last slope) to
/// the right of the last one.
class PLFunction {
 public:
  enum class Tail { Constant, Linear };

  PLFunction() = default;
  PLFunction(std::vector<Rational> xs, std::vector<Rational> ys, Tail tail = Tail::Constant);

  static PLFunction constant(const Rational& c);

  const std::vector<Rational>& xs() const { return xs_; }
  const std::vector<Rational>& ys() const { return ys_; }
  Tail tail() const { return tail_; }

  Rational operator()(const Rational& x) const;

  bool nondecreasing() const;
  bool nonincreasing() const;
  Rational min_value() const;  // over ℝ; requires a constant tail or a nonnegative tail slope
  /// Largest |slope| over all pieces, including the tail.
  Rational max_abs_slope() const;
  Rational tail_slope() const;

  friend bool operator==(const PLFunction&, const PLFunction&) = default;

 private:
  std::vector<Rational> xs_;
  std::vector<Rational> ys_;
  Tail tail_ = Tail::Constant;
};

}  // namespace coverforge
