#pragma once

#include <cstdint>
#include <vector>

#include "coverforge/geometry.hpp"

namespace coverforge {

struct SamplePlan {
  Box window;
  Rational step = Rational(1, 16);
  std::size_t count = 10000;
  std::uint64_t seed = 0;
  /// Grid step doubles until the grid has at most this many cells.
  std::size_t grid_cap = 1u << 16;
};

/// Cell centers of the step grid over the window.
std::vector<Point> grid_points(const SamplePlan& plan);
/// `count` dyadic points with 2^-20 resolution per axis.
std::vector<Point> random_points(const SamplePlan& plan);
/// Grid points followed by random points.
std::vector<Point> sample_points(const SamplePlan& plan);

}  // namespace coverforge
