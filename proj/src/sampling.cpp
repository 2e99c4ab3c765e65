#include "coverforge/sampling.hpp"

#include <random>

namespace coverforge {

namespace {

void require_bounded(const Box& w) {
  if (w.dim() == 0) return;
  if (!w.bounded()) throw Error(ErrorKind::EmptyWindow, "sampling needs a bounded window");
}

}  // namespace

std::vector<Point> grid_points(const SamplePlan& plan) {
  require_bounded(plan.window);
  const std::size_t n = plan.window.dim();
  if (n == 0) return {Point{}};
  if (plan.step <= 0) throw Error(ErrorKind::InvalidArgument, "grid step must be positive");
  Rational step = plan.step;
  std::vector<long> cells(n);
  while (true) {
    double total = 1;
    for (std::size_t i = 0; i < n; ++i) {
      const Rational w = plan.window[i].hi.value() - plan.window[i].lo.value();
      mpz_class c;
      mpz_cdiv_q(c.get_mpz_t(), Rational(w / step).get_num_mpz_t(), Rational(w / step).get_den_mpz_t());
      cells[i] = c.get_si();
      total *= static_cast<double>(cells[i]);
    }
    if (total <= static_cast<double>(plan.grid_cap)) break;
    step *= 2;
  }
  std::vector<std::vector<Rational>> axis(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Rational lo = plan.window[i].lo.value();
    const Rational hi = plan.window[i].hi.value();
    for (long k = 0; k < cells[i]; ++k) {
      const Rational left = lo + step * k;
      Rational right = left + step;
      if (right > hi) right = hi;
      axis[i].push_back((left + right) / 2);
    }
  }
  std::vector<Point> out;
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    Point p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = axis[i][idx[i]];
    out.push_back(std::move(p));
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (++idx[i] < axis[i].size()) break;
      idx[i] = 0;
      if (i == 0) return out;
    }
  }
}

std::vector<Point> random_points(const SamplePlan& plan) {
  require_bounded(plan.window);
  const std::size_t n = plan.window.dim();
  std::mt19937_64 rng(plan.seed);
  constexpr unsigned bits = 20;
  const Rational unit = pow2(-static_cast<long>(bits));
  std::vector<Point> out;
  out.reserve(plan.count);
  for (std::size_t s = 0; s < plan.count; ++s) {
    Point p(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t k = 0;
      while (k == 0) k = rng() >> (64 - bits);
      const Rational lo = plan.window[i].lo.value();
      const Rational w = plan.window[i].hi.value() - lo;
      p[i] = lo + w * unit * static_cast<unsigned long>(k);
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Point> sample_points(const SamplePlan& plan) {
  auto pts = grid_points(plan);
  auto rnd = random_points(plan);
  pts.insert(pts.end(), std::make_move_iterator(rnd.begin()), std::make_move_iterator(rnd.end()));
  return pts;
}

}  // namespace coverforge
