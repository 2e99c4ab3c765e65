#include "coverforge/lebesgue.hpp"

#include <algorithm>

namespace coverforge {

namespace {

Rational capped(const Extended& r) { return r.finite() ? min(r, Extended(1L)).value() : Rational(1); }

template <class F>
void for_each_box_near(const Cover& c, const Point& x, F&& visit) {
  for (const auto& e : c.elements) {
    if (!e.box_representable()) throw Error(ErrorKind::Unsupported, "field elements have no exact ball test");
    for (const auto& b : e.box_list()) visit(b);
    for (const auto& fam : e.families())
      for (const auto& m : fam.indices_containing(x)) visit(*fam.instance(m));
  }
  for (const auto& fam : c.schemas)
    for (const auto& m : fam.indices_containing(x)) visit(*fam.instance(m));
}

}  // namespace

Rational inscribed_radius(const Cover& c, const Point& x) {
  Rational best = 0;
  for_each_box_near(c, x, [&](const Box& b) {
    const Rational r = capped(ball_radius_in(b, x));
    if (r > best) best = r;
  });
  return best;
}

PLFunction lebesgue_profile(const Cover& c, const Rational& d_max, const Rational& delta) {
  if (delta <= 0 || d_max <= 0) throw Error(ErrorKind::InvalidArgument, "profile needs positive d_max and step");
  const std::size_t n = c.dim();
  if (n == 0) return PLFunction::constant(1);
  mpz_class k_top;
  mpz_cdiv_q(k_top.get_mpz_t(), Rational(d_max / delta).get_num_mpz_t(), Rational(d_max / delta).get_den_mpz_t());
  const long breaks = k_top.get_si();  // breakpoints 0, delta, ..., breaks*delta >= d_max
  const long cells = breaks + 2;       // per side, enough for norms up to (breaks+1)*delta + half diagonal
  const Rational half_diag = sqrt_upper(Rational(n) * delta * delta / 4);

  std::vector<Rational> best(static_cast<std::size_t>(breaks + 1), Rational(2));
  std::vector<long> idx(n, -cells);
  Point center(n);
  while (true) {
    for (std::size_t i = 0; i < n; ++i) center[i] = (Rational(idx[i]) + Rational(1, 2)) * delta;
    const Rational norm_lo = sqrt_lower(squared_norm(center));
    // Smallest breakpoint k whose window ‖x‖ <= d_{k+1} includes this cell.
    mpz_class k;
    const Rational q = (norm_lo - half_diag) / delta;
    mpz_cdiv_q(k.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    long first = std::max(0L, k.get_si() - 1);
    if (first <= breaks) {
      const Rational v = inscribed_radius(c, center) - half_diag;
      if (v <= 0) {
        std::string where;
        for (const auto& x : center) where += (where.empty() ? "" : ",") + to_string(x);
        throw Error(ErrorKind::CoverageGap, "inscribed radius vanishes near (" + where + ")");
      }
      auto& slot = best[static_cast<std::size_t>(first)];
      if (v < slot) slot = v;
    }
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (++idx[i] < cells) break;
      idx[i] = -cells;
      if (i == 0) goto done;
    }
  }
done:
  std::vector<Rational> xs, ys;
  Rational running = 1;
  for (long k = 0; k <= breaks; ++k) {
    running = std::min(running, best[static_cast<std::size_t>(k)]);
    xs.push_back(delta * k);
    ys.push_back(running);
  }
  return PLFunction(xs, ys);
}

namespace {

// x - p(x) = 0 on a nonincreasing positive PL function, solved exactly.
Rational fixed_point(const PLFunction& p) {
  std::vector<Rational> pts{0};
  for (const auto& x : p.xs())
    if (x > 0) pts.push_back(x);
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const Rational &a = pts[k], &b = pts[k + 1];
    const Rational ga = a - p(a), gb = b - p(b);
    if (ga <= 0 && gb >= 0) {
      if (gb == ga) return a;
      return a - ga * (b - a) / (gb - ga);
    }
  }
  const Rational tail = p(pts.back());
  if (tail >= pts.back()) return tail;
  throw Error(ErrorKind::InvalidArgument, "no fixed point bracket");
}

}  // namespace

Rescaler build_rescaler(const PLFunction& profile, std::size_t dim) {
  if (!profile.nonincreasing() || profile.min_value() <= 0)
    throw Error(ErrorKind::InvalidArgument, "profile must be nonincreasing and positive");
  for (const auto& y : profile.ys())
    if (y > 1) throw Error(ErrorKind::InvalidArgument, "profile exceeds 1");
  Rescaler r;
  r.dim = dim;
  r.profile = profile;
  r.fixed_point = fixed_point(profile);
  std::vector<Rational> ds{r.fixed_point};
  for (const auto& x : profile.xs())
    if (x > r.fixed_point) ds.push_back(x);
  const Rational far = profile.ys().empty() ? profile(Rational(0)) : profile.ys().back();
  std::vector<Rational> xs, ys;
  for (std::size_t j = 0; j < ds.size(); ++j) {
    const Rational next = j + 1 < ds.size() ? profile(ds[j + 1]) : far;
    const Rational value = 1 + 1 / next;
    if (!ys.empty() && ys.back() == value) continue;
    xs.push_back(ds[j] - profile(ds[j]));
    ys.push_back(value);
  }
  r.b = PLFunction(xs, ys);
  return r;
}

Rational preimage_radius(const RadialMap& map, const Rational& norm_lower, const Rational& t) {
  const Rational scaled = t / map.dilation;
  Rational inner = norm_lower - scaled / map.b(Rational(0));
  if (inner < 0) inner = 0;
  return scaled / map.b(inner);
}

LebesgueReport verify_lebesgue(const Cover& c, const RadialMap& map, const std::vector<Point>& samples) {
  LebesgueReport rep;
  for (const auto& x : samples) {
    ++rep.checked;
    const Rational need = preimage_radius(map, sqrt_lower(squared_norm(x)), 1);
    bool ok = false;
    for_each_box_near(c, x, [&](const Box& b) {
      const Extended r = ball_radius_in(b, x);
      ok = ok || r >= Extended(need);
    });
    if (!ok) {
      ++rep.failed;
      if (!rep.witness) rep.witness = x;
    }
  }
  return rep;
}

bool check_radial_inverse(const RadialMap& map, const std::vector<Rational>& radii) {
  if (!map.monotone()) return false;
  const Rational tol = pow2(-40);
  for (const auto& r : radii) {
    const Rational back = map.inverse_radius_lower(map.radius(r));
    if (abs(back - r) > tol) return false;
  }
  return true;
}

}  // namespace coverforge
