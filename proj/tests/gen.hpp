#pragma once

#include <random>

#include "coverforge/geometry.hpp"
#include "coverforge/open_set.hpp"

namespace testgen {

using namespace coverforge;

// Seeded generator for rational fixtures; values land on a 1/den grid.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  long integer(long lo, long hi) {  // inclusive
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<long>(rng_() % span);
  }

  Rational rational(const Rational& lo, const Rational& hi, long den = 8) {
    const Rational steps = (hi - lo) * den;
    const long k = integer(0, steps.get_num().get_si() / steps.get_den().get_si());
    Rational step(k, den);
    step.canonicalize();
    return lo + step;
  }

  bool coin() { return rng_() & 1; }

  // Box inside [lo, hi]^n with side at least min_side.
  Box box(std::size_t n, const Rational& lo, const Rational& hi, const Rational& min_side = Rational(1, 2)) {
    std::vector<Interval> axes;
    for (std::size_t i = 0; i < n; ++i) {
      Rational a = rational(lo, hi - min_side);
      Rational b = rational(a + min_side, hi);
      axes.push_back({Extended(a), Extended(b)});
    }
    return Box(std::move(axes));
  }

  Point point(const Box& window, long den = 64) {
    Point p;
    for (const auto& iv : window.axes()) {
      Rational x = rational(iv.lo.value(), iv.hi.value(), den);
      if (x == iv.lo.value()) x += Rational(1, 2 * den);
      if (x == iv.hi.value()) x -= Rational(1, 2 * den);
      p.push_back(x);
    }
    return p;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace testgen
