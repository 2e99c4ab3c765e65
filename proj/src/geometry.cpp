#include "coverforge/geometry.hpp"

#include <algorithm>

namespace coverforge {

std::optional<Interval> intersect(const Interval& a, const Interval& b) {
  Interval r{max(a.lo, b.lo), min(a.hi, b.hi)};
  if (!(r.lo < r.hi)) return std::nullopt;
  return r;
}

Box::Box(std::vector<Interval> axes) : axes_(std::move(axes)) {
  for (const auto& iv : axes_)
    if (!(iv.lo < iv.hi)) throw Error(ErrorKind::InvalidArgument, "degenerate box axis");
}

Box Box::whole(std::size_t dim) {
  return Box(std::vector<Interval>(dim, Interval{Extended::neg_inf(), Extended::pos_inf()}));
}

Box Box::of(std::initializer_list<std::pair<Rational, Rational>> axes) {
  std::vector<Interval> v;
  for (const auto& [lo, hi] : axes) v.push_back({Extended(lo), Extended(hi)});
  return Box(std::move(v));
}

bool Box::contains(const Point& x) const {
  if (x.size() != dim()) throw Error(ErrorKind::DimensionMismatch, "point/box dimension mismatch");
  for (std::size_t i = 0; i < dim(); ++i)
    if (!axes_[i].contains(x[i])) return false;
  return true;
}

bool Box::bounded() const {
  return std::all_of(axes_.begin(), axes_.end(), [](const Interval& iv) { return iv.bounded(); });
}

bool Box::is_whole() const {
  return std::all_of(axes_.begin(), axes_.end(),
                     [](const Interval& iv) { return iv.lo.is_neg_inf() && iv.hi.is_pos_inf(); });
}

Point Box::center() const {
  Point c;
  for (const auto& iv : axes_) c.push_back((iv.lo.value() + iv.hi.value()) / 2);
  return c;
}

std::optional<Box> intersect(const Box& a, const Box& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "box dimension mismatch");
  std::vector<Interval> axes;
  axes.reserve(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    auto iv = intersect(a[i], b[i]);
    if (!iv) return std::nullopt;
    axes.push_back(*iv);
  }
  return Box(std::move(axes));
}

bool subset(const Box& a, const Box& b) {
  for (std::size_t i = 0; i < a.dim(); ++i)
    if (a[i].lo < b[i].lo || b[i].hi < a[i].hi) return false;
  return true;
}

namespace {

Rational representative(const Extended& lo, const Extended& hi) {
  if (lo.finite() && hi.finite()) return (lo.value() + hi.value()) / 2;
  if (lo.finite()) return lo.value() + 1;
  if (hi.finite()) return hi.value() - 1;
  return Rational(0);
}

std::optional<Point> uncovered_rec(const Box& a, const std::vector<const Box*>& cover, std::size_t axis,
                                   Point& prefix) {
  if (axis == a.dim()) {
    if (cover.empty()) return prefix;
    return std::nullopt;
  }
  if (cover.empty()) {
    Point p = prefix;
    for (std::size_t i = axis; i < a.dim(); ++i) p.push_back(representative(a[i].lo, a[i].hi));
    return p;
  }
  const Interval& span = a[axis];
  std::vector<Rational> cuts;
  for (const Box* b : cover) {
    for (const Extended& e : {(*b)[axis].lo, (*b)[axis].hi})
      if (e.finite() && span.contains(e.value())) cuts.push_back(e.value());
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Extended> edges;
  edges.push_back(span.lo);
  for (const auto& c : cuts) edges.emplace_back(c);
  edges.push_back(span.hi);

  std::vector<const Box*> sub;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const Extended& l = edges[k];
    const Extended& h = edges[k + 1];
    sub.clear();
    for (const Box* b : cover)
      if ((*b)[axis].lo <= l && h <= (*b)[axis].hi) sub.push_back(b);
    prefix.push_back(representative(l, h));
    if (auto w = uncovered_rec(a, sub, axis + 1, prefix)) return w;
    prefix.pop_back();
  }
  for (const auto& c : cuts) {
    sub.clear();
    for (const Box* b : cover)
      if ((*b)[axis].contains(c)) sub.push_back(b);
    prefix.push_back(c);
    if (auto w = uncovered_rec(a, sub, axis + 1, prefix)) return w;
    prefix.pop_back();
  }
  return std::nullopt;
}

}  // namespace

std::optional<Point> uncovered_point(const Box& a, const std::vector<Box>& cover) {
  std::vector<const Box*> relevant;
  for (const auto& b : cover) {
    if (b.dim() != a.dim()) throw Error(ErrorKind::DimensionMismatch, "box dimension mismatch");
    if (intersect(a, b)) relevant.push_back(&b);
  }
  Point prefix;
  return uncovered_rec(a, relevant, 0, prefix);
}

std::optional<Point> union_difference_witness(const std::vector<Box>& a, const std::vector<Box>& b) {
  for (const auto& box : a)
    if (auto w = uncovered_point(box, b)) return w;
  return std::nullopt;
}

Rational max_abs_coord(const Box& b) {
  if (!b.bounded()) throw Error(ErrorKind::EmptyWindow, "unbounded box");
  Rational out = 0;
  for (const auto& iv : b.axes()) {
    const Rational lo = abs(iv.lo.value()), hi = abs(iv.hi.value());
    if (lo > out) out = lo;
    if (hi > out) out = hi;
  }
  return out;
}

Extended ball_radius_in(const Box& b, const Point& x) {
  if (!b.contains(x)) return Extended(Rational(0));
  Extended r = Extended::pos_inf();
  for (std::size_t i = 0; i < b.dim(); ++i) {
    if (b[i].lo.finite()) r = min(r, Extended(Rational(x[i] - b[i].lo.value())));
    if (b[i].hi.finite()) r = min(r, Extended(Rational(b[i].hi.value() - x[i])));
  }
  return r;
}

Interval AxisConstraint::at(const Index& m) const {
  if (coord < 0 || period == 0) return {lo, hi};
  const Rational shift = period * m.at(static_cast<std::size_t>(coord));
  return {lo + Extended(shift), hi + Extended(shift)};
}

namespace {

// Merges fixed constraints and same-coordinate/same-period constraints on each
// axis. Returns false if the family is empty.
bool normalize_axes(std::vector<std::vector<AxisConstraint>>& axes) {
  for (auto& list : axes) {
    std::vector<AxisConstraint> merged;
    for (const auto& c : list) {
      if (c.lo.is_neg_inf() && c.hi.is_pos_inf()) continue;
      const bool fixed = c.coord < 0 || c.period == 0;
      AxisConstraint norm = c;
      if (fixed) {
        norm.coord = -1;
        norm.period = 0;
      }
      bool absorbed = false;
      for (auto& m : merged) {
        if (m.coord == norm.coord && m.period == norm.period) {
          m.lo = max(m.lo, norm.lo);
          m.hi = min(m.hi, norm.hi);
          absorbed = true;
          break;
        }
      }
      if (!absorbed) merged.push_back(norm);
    }
    for (const auto& m : merged)
      if (!(m.lo < m.hi)) return false;
    list = std::move(merged);
  }
  return true;
}

Rational floor_q(const Rational& q) {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rational(r);
}

Rational ceil_q(const Rational& q) {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rational(r);
}

// Integers t with lo < t < hi.
bool open_integer_range(const Rational& lo, const Rational& hi, long& first, long& last) {
  const Rational f = floor_q(lo) + 1;
  const Rational l = ceil_q(hi) - 1;
  if (f > l) return false;
  first = f.get_num().get_si();
  last = l.get_num().get_si();
  return true;
}

}  // namespace

LatticeFamily::LatticeFamily(std::size_t dim, std::size_t arity, std::vector<std::vector<AxisConstraint>> axes)
    : dim_(dim), arity_(arity), axes_(std::move(axes)) {
  if (axes_.size() != dim_) throw Error(ErrorKind::DimensionMismatch, "lattice template has wrong axis count");
  for (const auto& list : axes_)
    for (const auto& c : list)
      if (c.coord >= static_cast<int>(arity_))
        throw Error(ErrorKind::InvalidArgument, "lattice constraint names a coordinate beyond the arity");
  if (!normalize_axes(axes_)) throw Error(ErrorKind::InvalidArgument, "lattice template is empty");
}

LatticeFamily LatticeFamily::slab(std::size_t dim, std::size_t axis, const Rational& lo, const Rational& hi,
                                  const Rational& period) {
  std::vector<std::vector<AxisConstraint>> axes(dim);
  axes.at(axis).push_back({Extended(lo), Extended(hi), 0, period});
  return LatticeFamily(dim, 1, std::move(axes));
}

std::optional<Box> LatticeFamily::instance(const Index& m) const {
  if (m.size() != arity_) throw Error(ErrorKind::DimensionMismatch, "lattice index has wrong arity");
  std::vector<Interval> out;
  out.reserve(dim_);
  for (const auto& list : axes_) {
    Interval iv{Extended::neg_inf(), Extended::pos_inf()};
    for (const auto& c : list) {
      auto r = intersect(iv, c.at(m));
      if (!r) return std::nullopt;
      iv = *r;
    }
    out.push_back(iv);
  }
  return Box(std::move(out));
}

bool LatticeFamily::coord_range(std::size_t c, const Box& window, long& first, long& last) const {
  bool bounded = false;
  Rational best_lo, best_hi;
  for (std::size_t a = 0; a < dim_; ++a) {
    if (!window[a].bounded()) continue;
    const Rational& wl = window[a].lo.value();
    const Rational& wh = window[a].hi.value();
    for (const auto& k : axes_[a]) {
      if (k.coord != static_cast<int>(c) || k.period == 0 || !k.lo.finite() || !k.hi.finite()) continue;
      // lo + p m < wh and hi + p m > wl
      Rational lo, hi;
      if (k.period > 0) {
        lo = (wl - k.hi.value()) / k.period;
        hi = (wh - k.lo.value()) / k.period;
      } else {
        const Rational q = -k.period;
        lo = (k.lo.value() - wh) / q;
        hi = (k.hi.value() - wl) / q;
      }
      if (!bounded || lo > best_lo) best_lo = lo;
      if (!bounded || hi < best_hi) best_hi = hi;
      bounded = true;
    }
  }
  if (!bounded) return false;
  if (!open_integer_range(best_lo, best_hi, first, last)) {
    first = 1;
    last = 0;
  }
  return true;
}

std::vector<Index> LatticeFamily::indices_meeting(const Box& window) const {
  if (window.dim() != dim_) throw Error(ErrorKind::DimensionMismatch, "window dimension mismatch");
  std::vector<long> first(arity_), last(arity_);
  for (std::size_t c = 0; c < arity_; ++c) {
    if (!coord_range(c, window, first[c], last[c]))
      throw Error(ErrorKind::InvalidArgument, "lattice family is not locally finite on this window");
    if (first[c] > last[c]) return {};
  }
  std::vector<Index> out;
  Index m(first.begin(), first.end());
  while (true) {
    if (auto b = instance(m); b && intersect(*b, window)) out.push_back(m);
    std::size_t c = arity_;
    while (c > 0) {
      --c;
      if (m[c] < last[c]) {
        ++m[c];
        for (std::size_t d = c + 1; d < arity_; ++d) m[d] = first[d];
        break;
      }
      if (c == 0) return out;
    }
    if (arity_ == 0) return out;
  }
}

std::vector<Index> LatticeFamily::indices_containing(const Point& x) const {
  if (x.size() != dim_) throw Error(ErrorKind::DimensionMismatch, "point dimension mismatch");
  std::vector<Interval> axes;
  for (const auto& c : x) axes.push_back({Extended(Rational(c - 1)), Extended(Rational(c + 1))});
  std::vector<Index> out;
  for (auto& m : indices_meeting(Box(std::move(axes))))
    if (instance(m)->contains(x)) out.push_back(std::move(m));
  return out;
}

bool LatticeFamily::locally_finite() const {
  for (std::size_t c = 0; c < arity_; ++c) {
    bool ok = false;
    for (const auto& list : axes_)
      for (const auto& k : list)
        if (k.coord == static_cast<int>(c) && k.period != 0 && k.lo.finite() && k.hi.finite()) ok = true;
    if (!ok) return false;
  }
  return true;
}

bool LatticeFamily::separated() const {
  for (std::size_t c = 0; c < arity_; ++c) {
    bool ok = false;
    for (const auto& list : axes_)
      for (const auto& k : list)
        if (k.coord == static_cast<int>(c) && k.period != 0 && k.lo.finite() && k.hi.finite() &&
            abs(k.period) >= k.hi.value() - k.lo.value())
          ok = true;
    if (!ok) return false;
  }
  return true;
}

LatticeFamily intersect(const LatticeFamily& f, const Box& b) {
  if (f.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "family/box dimension mismatch");
  auto axes = f.axes();
  for (std::size_t a = 0; a < b.dim(); ++a)
    if (!(b[a].lo.is_neg_inf() && b[a].hi.is_pos_inf())) axes[a].push_back({b[a].lo, b[a].hi, -1, 0});
  return LatticeFamily(f.dim(), f.arity(), std::move(axes));
}

namespace {

struct RawFamily {
  std::size_t arity;
  std::vector<std::vector<AxisConstraint>> axes;
};

// Finds two constraints on one axis with distinct coordinates and equal
// periods; substitutes the second coordinate by the first plus an offset.
bool eliminate_once(const RawFamily& in, std::vector<RawFamily>& out) {
  for (const auto& list : in.axes) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      for (std::size_t j = 0; j < list.size(); ++j) {
        const auto& a = list[i];
        const auto& b = list[j];
        if (i == j || a.coord < 0 || b.coord < 0 || a.coord == b.coord) continue;
        if (a.period != b.period || a.period == 0) continue;
        if (!(a.lo.finite() && a.hi.finite() && b.lo.finite() && b.hi.finite())) continue;
        const int keep = std::min(a.coord, b.coord);
        const int drop = std::max(a.coord, b.coord);
        const auto& ck = a.coord == keep ? a : b;
        const auto& cd = a.coord == keep ? b : a;
        // m_drop = m_keep + t; nonempty iff ck.lo < cd.hi + p t and cd.lo + p t < ck.hi
        const Rational& p = ck.period;
        Rational lo = (ck.lo.value() - cd.hi.value()) / p;
        Rational hi = (ck.hi.value() - cd.lo.value()) / p;
        if (p < 0) std::swap(lo, hi);
        long first = 0, last = -1;
        if (!open_integer_range(lo, hi, first, last)) return true;
        for (long t = first; t <= last; ++t) {
          RawFamily r{in.arity - 1, in.axes};
          for (auto& l : r.axes) {
            for (auto& c : l) {
              if (c.coord == drop) {
                const Rational shift = c.period * t;
                c.lo = c.lo + Extended(shift);
                c.hi = c.hi + Extended(shift);
                c.coord = keep;
              } else if (c.coord > drop) {
                --c.coord;
              }
            }
          }
          if (normalize_axes(r.axes)) out.push_back(std::move(r));
        }
        return true;
      }
    }
  }
  return false;
}

}  // namespace

std::vector<LatticeFamily> intersect(const LatticeFamily& a, const LatticeFamily& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "family dimension mismatch");
  RawFamily start{a.arity() + b.arity(), a.axes()};
  for (std::size_t d = 0; d < b.dim(); ++d) {
    for (auto c : b.axes()[d]) {
      if (c.coord >= 0) c.coord += static_cast<int>(a.arity());
      start.axes[d].push_back(c);
    }
  }
  std::vector<LatticeFamily> result;
  if (!normalize_axes(start.axes)) return result;
  std::vector<RawFamily> work{start};
  while (!work.empty()) {
    RawFamily cur = std::move(work.back());
    work.pop_back();
    std::vector<RawFamily> next;
    if (eliminate_once(cur, next)) {
      for (auto it = next.rbegin(); it != next.rend(); ++it) work.push_back(std::move(*it));
    } else {
      result.emplace_back(a.dim(), cur.arity, std::move(cur.axes));
    }
  }
  return result;
}

std::vector<Box> clip_to_window(const LatticeFamily& f, const Box& window) {
  std::vector<Box> out;
  for (const auto& m : f.indices_meeting(window))
    if (auto b = intersect(*f.instance(m), window)) out.push_back(*b);
  return out;
}

}  // namespace coverforge
