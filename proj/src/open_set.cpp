#include "coverforge/open_set.hpp"

#include <mutex>
#include <unordered_map>

namespace coverforge {

OpenSet OpenSet::empty(std::size_t dim) { return boxes(dim, {}); }

OpenSet OpenSet::whole(std::size_t dim) { return boxes(dim, {Box::whole(dim)}); }

OpenSet OpenSet::boxes(std::size_t dim, std::vector<Box> boxes) {
  for (const auto& b : boxes)
    if (b.dim() != dim) throw Error(ErrorKind::DimensionMismatch, "box dimension differs from open set");
  OpenSet s;
  s.kind_ = Kind::Boxes;
  s.dim_ = dim;
  s.boxes_ = std::move(boxes);
  return s;
}

OpenSet OpenSet::symbolic(std::size_t dim, std::vector<LatticeFamily> families, std::vector<Box> boxes) {
  OpenSet s = OpenSet::boxes(dim, std::move(boxes));
  for (const auto& f : families)
    if (f.dim() != dim) throw Error(ErrorKind::DimensionMismatch, "family dimension differs from open set");
  if (!families.empty()) {
    s.kind_ = Kind::Symbolic;
    s.families_ = std::move(families);
  }
  return s;
}

OpenSet OpenSet::positive(Field h) {
  if (!h->nonneg) throw Error(ErrorKind::InvalidArgument, "field open set needs a nonnegative field");
  OpenSet s;
  s.kind_ = Kind::Field;
  s.dim_ = h->dim;
  s.field_ = h;
  return s;
}

bool OpenSet::contains(const Point& x) const {
  if (x.size() != dim_) throw Error(ErrorKind::DimensionMismatch, "point/open set dimension mismatch");
  if (kind_ == Kind::Field) return eval(field_, x) > 0;
  for (const auto& b : boxes_)
    if (b.contains(x)) return true;
  for (const auto& f : families_)
    if (f.contains(x)) return true;
  return false;
}

namespace {

bool is_whole(const OpenSet& s) {
  return s.kind() == OpenSet::Kind::Boxes && s.box_list().size() == 1 && s.box_list()[0].is_whole();
}

// Drops boxes inside another and merges pairs that differ on one axis where
// they overlap, so nested intersections stay small.
std::vector<Box> tidy(std::vector<Box> boxes) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < boxes.size() && !changed; ++i)
      for (std::size_t j = 0; j < boxes.size() && !changed; ++j) {
        if (i == j) continue;
        if (subset(boxes[j], boxes[i])) {
          boxes.erase(boxes.begin() + static_cast<long>(j));
          changed = true;
          break;
        }
        std::size_t differ = boxes[i].dim(), count = 0;
        for (std::size_t k = 0; k < boxes[i].dim(); ++k)
          if (!(boxes[i][k] == boxes[j][k])) differ = k, ++count;
        if (count != 1) continue;
        const Interval &a = boxes[i][differ], &b = boxes[j][differ];
        if (!(b.lo < a.hi && a.lo < b.hi)) continue;
        std::vector<Interval> axes = boxes[i].axes();
        axes[differ] = {min(a.lo, b.lo), max(a.hi, b.hi)};
        boxes[i] = Box(std::move(axes));
        boxes.erase(boxes.begin() + static_cast<long>(j));
        changed = true;
      }
  }
  return boxes;
}

}  // namespace

OpenSet intersect(const OpenSet& a, const OpenSet& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "open set dimension mismatch");
  if (is_whole(a)) return b;
  if (is_whole(b)) return a;
  if (a.is_empty_boxes() || b.is_empty_boxes()) return OpenSet::empty(a.dim());
  if (a == b) return a;
  if (!a.box_representable() || !b.box_representable())
    return OpenSet::positive(fld::min({indicator(a), indicator(b)}));

  std::vector<Box> boxes;
  std::vector<LatticeFamily> fams;
  for (const auto& x : a.box_list())
    for (const auto& y : b.box_list())
      if (auto r = intersect(x, y)) boxes.push_back(*r);
  for (const auto& f : a.families())
    for (const auto& y : b.box_list()) fams.push_back(intersect(f, y));
  for (const auto& f : b.families())
    for (const auto& x : a.box_list()) fams.push_back(intersect(f, x));
  for (const auto& f : a.families())
    for (const auto& g : b.families())
      for (auto& h : intersect(f, g)) fams.push_back(std::move(h));
  return OpenSet::symbolic(a.dim(), std::move(fams), tidy(std::move(boxes)));
}

OpenSet unite(const std::vector<OpenSet>& sets, std::size_t dim) {
  bool boxy = true;
  for (const auto& s : sets) {
    if (s.dim() != dim) throw Error(ErrorKind::DimensionMismatch, "open set dimension mismatch");
    boxy = boxy && s.box_representable();
  }
  if (sets.size() == 1) return sets.front();
  if (boxy) {
    std::vector<Box> boxes;
    std::vector<LatticeFamily> fams;
    for (const auto& s : sets) {
      boxes.insert(boxes.end(), s.box_list().begin(), s.box_list().end());
      fams.insert(fams.end(), s.families().begin(), s.families().end());
    }
    return OpenSet::symbolic(dim, std::move(fams), tidy(std::move(boxes)));
  }
  std::vector<Field> inds;
  for (const auto& s : sets) inds.push_back(indicator(s));
  return OpenSet::positive(fld::max(std::move(inds)));
}

Field indicator(const OpenSet& s) {
  if (s.kind() == OpenSet::Kind::Field) return s.field();
  std::vector<Field> parts;
  for (const auto& f : s.families()) parts.push_back(fld::lattice_tent(f));
  for (const auto& b : s.box_list()) parts.push_back(fld::tent(b));
  if (parts.empty()) return fld::zero(s.dim());
  return fld::max(std::move(parts));
}

namespace {

std::optional<OpenSet> compute_support(Field f);

std::optional<OpenSet> support_cached(Field f) {
  static std::mutex mu;
  static std::unordered_map<Field, std::optional<OpenSet>> memo;
  {
    std::lock_guard lock(mu);
    if (auto it = memo.find(f); it != memo.end()) return it->second;
  }
  auto s = compute_support(f);
  std::lock_guard lock(mu);
  memo.emplace(f, s);
  return s;
}

bool positive_right_of_zero(const PLFunction& pl) {
  for (const auto& x : pl.xs())
    if (x > 0) return pl(x) > 0;
  return pl.tail_slope() > 0 || pl.ys().back() > 0;
}

// f = slope * x[axis] + offset, with axis = -1 for constants.
struct Affine1 {
  long axis = -1;
  Rational slope, offset;
};

std::optional<Affine1> affine1(Field f) {
  switch (f->op) {
    case Op::Const:
      return Affine1{-1, 0, f->value};
    case Op::Coord:
      return Affine1{static_cast<long>(f->coord), 1, 0};
    case Op::Add:
    case Op::Sub: {
      Affine1 acc;
      for (std::size_t i = 0; i < f->args.size(); ++i) {
        auto a = affine1(f->args[i]);
        if (!a) return std::nullopt;
        const int sign = (f->op == Op::Sub && i > 0) ? -1 : 1;
        if (a->axis >= 0) {
          if (acc.axis >= 0 && acc.axis != a->axis) return std::nullopt;
          acc.axis = a->axis;
          acc.slope += sign * a->slope;
        }
        acc.offset += sign * a->offset;
      }
      return acc;
    }
    case Op::Mul: {
      Affine1 acc{-1, 0, 1};
      for (Field a : f->args) {
        auto t = affine1(a);
        if (!t) return std::nullopt;
        if (t->axis >= 0 && acc.axis >= 0) return std::nullopt;
        if (t->axis >= 0) {
          acc = Affine1{t->axis, t->slope * acc.offset, t->offset * acc.offset};
        } else {
          acc.slope *= t->offset;
          acc.offset *= t->offset;
        }
      }
      return acc;
    }
    default:
      return std::nullopt;
  }
}

std::optional<OpenSet> half_space(std::size_t n, const Affine1& a) {
  if (a.axis < 0 || a.slope == 0) return a.offset > 0 ? OpenSet::whole(n) : OpenSet::empty(n);
  std::vector<Interval> axes(n, Interval{Extended::neg_inf(), Extended::pos_inf()});
  const Rational root = -a.offset / a.slope;
  if (a.slope > 0)
    axes[a.axis].lo = Extended(root);
  else
    axes[a.axis].hi = Extended(root);
  return OpenSet::box(Box(axes));
}

std::optional<OpenSet> compute_support(Field f) {
  const std::size_t n = f->dim;
  auto all_nonneg = [&] {
    for (Field a : f->args)
      if (!a->nonneg) return false;
    return true;
  };
  switch (f->op) {
    case Op::Const:
      return f->value > 0 ? OpenSet::whole(n) : OpenSet::empty(n);
    case Op::Tent:
      return OpenSet::box(f->box);
    case Op::LatticeTent:
      return OpenSet::symbolic(n, {f->family});
    case Op::Add:
    case Op::Max: {
      if (!all_nonneg()) return std::nullopt;
      std::vector<OpenSet> parts;
      for (Field a : f->args) {
        auto s = support_cached(a);
        if (!s) return std::nullopt;
        parts.push_back(*s);
      }
      return unite(parts, n);
    }
    case Op::Mul:
    case Op::Min: {
      if (!all_nonneg()) return std::nullopt;
      std::optional<OpenSet> acc;
      for (Field a : f->args) {
        auto s = support_cached(a);
        if (!s) return std::nullopt;
        acc = acc ? intersect(*acc, *s) : *s;
      }
      return acc;
    }
    case Op::Div: {
      auto a = support_cached(f->args[0]);
      auto b = support_cached(f->args[1]);
      if (!a || !b) return std::nullopt;
      return intersect(*a, *b);
    }
    case Op::PosPart:
    case Op::Clamp01:
      if (!f->args[0]->nonneg) {
        if (auto a = affine1(f->args[0])) return half_space(n, *a);
        return std::nullopt;
      }
      return support_cached(f->args[0]);
    case Op::PlCompose: {
      Field a = f->args[0];
      if (!a->nonneg || !f->pl.nondecreasing()) return std::nullopt;
      const Rational at0 = f->pl(Rational(0));
      if (at0 > 0) return OpenSet::whole(n);
      if (at0 == 0 && positive_right_of_zero(f->pl)) return support_cached(a);
      return std::nullopt;
    }
    case Op::Coord:
    case Op::Sub:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

std::optional<OpenSet> exact_support(Field f) { return support_cached(f); }

std::vector<Box> window_boxes(const OpenSet& s, const Box& window) {
  if (!s.box_representable()) throw Error(ErrorKind::Unsupported, "window_boxes on a field open set");
  std::vector<Box> out;
  for (const auto& b : s.box_list())
    if (auto r = intersect(b, window)) out.push_back(*r);
  for (const auto& f : s.families()) {
    auto clipped = clip_to_window(f, window);
    out.insert(out.end(), clipped.begin(), clipped.end());
  }
  return out;
}

}  // namespace coverforge
