#include "coverforge/entail.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "coverforge/patterns.hpp"

namespace coverforge {

const char* tier_name(Tier t) {
  switch (t) {
    case Tier::Exact: return "EXACT";
    case Tier::CertifiedOnWindow: return "CERTIFIED-ON-WINDOW";
    case Tier::Heuristic: return "HEURISTIC";
    case Tier::Failed: return "FAILED";
  }
  return "?";
}

Tier weakest(Tier a, Tier b) { return static_cast<int>(a) > static_cast<int>(b) ? a : b; }

namespace {

using MaybeTier = std::optional<Tier>;

MaybeTier both(MaybeTier a, const std::function<MaybeTier()>& b) {
  if (!a) return std::nullopt;
  MaybeTier r = b();
  if (!r) return std::nullopt;
  return weakest(*a, *r);
}

template <class Fn>
MaybeTier all_of(const std::vector<Field>& xs, Fn fn) {
  MaybeTier acc = Tier::Exact;
  for (Field x : xs) {
    MaybeTier r = fn(x);
    if (!r) return std::nullopt;
    acc = weakest(*acc, *r);
  }
  return acc;
}

template <class Fn>
MaybeTier any_of(const std::vector<Field>& xs, Fn fn) {
  for (Field x : xs)
    if (MaybeTier r = fn(x)) return r;
  return std::nullopt;
}

bool args_nonneg(Field f) {
  return std::all_of(f->args.begin(), f->args.end(), [](Field a) { return a->nonneg; });
}

bool is_pos_const(Field f) { return f->op == Op::Const && f->value > 0; }
bool is_zero_field(Field f) { return f->op == Op::Const && f->value <= 0; }

// {pl(a) > 0} ⊂ {a > 0} for nonnegative a.
bool pl_vanishes_off_support(Field f) {
  return f->args[0]->nonneg && f->pl.nondecreasing() && f->pl(Rational(0)) <= 0;
}

// {a > 0} ⊂ {pl(a) > 0}.
bool pl_positive_on_support(Field f) {
  if (!f->pl.nondecreasing() || f->pl(Rational(0)) < 0) return false;
  for (const auto& x : f->pl.xs())
    if (x > 0) return f->pl(x) > 0;
  return f->pl.tail_slope() > 0 || f->pl.ys().back() > 0;
}

// Terms of nested nonnegative Add/Max nodes; positivity of the node is the
// union of the terms' positivity sets.
void union_terms(Field f, std::vector<Field>& out) {
  if ((f->op == Op::Add || f->op == Op::Max) && args_nonneg(f)) {
    for (Field a : f->args) union_terms(a, out);
  } else {
    out.push_back(f);
  }
}

bool has_families(const OpenSet& s) { return !s.families().empty(); }

bool bounded_boxes(const OpenSet& s) {
  if (has_families(s)) return false;
  return std::all_of(s.box_list().begin(), s.box_list().end(), [](const Box& b) { return b.bounded(); });
}

std::optional<Box> bounding_box(const OpenSet& s) {
  if (s.box_list().empty()) return std::nullopt;
  std::vector<Interval> axes = s.box_list().front().axes();
  for (const auto& b : s.box_list())
    for (std::size_t i = 0; i < b.dim(); ++i) {
      axes[i].lo = min(axes[i].lo, b[i].lo);
      axes[i].hi = max(axes[i].hi, b[i].hi);
    }
  return Box(std::move(axes));
}

// Every instance of f lies in the same-index instance of g.
bool family_refines(const LatticeFamily& f, const LatticeFamily& g) {
  if (f.dim() != g.dim() || f.arity() != g.arity()) return false;
  for (std::size_t a = 0; a < f.dim(); ++a)
    for (const auto& c : g.axes()[a])
      if (std::find(f.axes()[a].begin(), f.axes()[a].end(), c) == f.axes()[a].end()) return false;
  return true;
}

Point box_point(const Box& b) {
  Point p;
  for (const auto& iv : b.axes()) {
    if (iv.lo.finite() && iv.hi.finite()) {
      p.push_back((iv.lo.value() + iv.hi.value()) / 2);
    } else if (iv.lo.finite()) {
      p.push_back(iv.lo.value() + 1);
    } else if (iv.hi.finite()) {
      p.push_back(iv.hi.value() - 1);
    } else {
      p.emplace_back(0);
    }
  }
  return p;
}

struct ZigzagPiece {
  Rational scale = 1;
  bool has_lower = false;
  Rational beta;
  Field lower = nullptr;
  Field upper = nullptr;
  Rational alpha;
};

// Parses c · max(0, beta - lower) · max(0, upper - alpha).
std::optional<ZigzagPiece> parse_zigzag(Field h) {
  std::vector<Field> factors = h->op == Op::Mul ? h->args : std::vector<Field>{h};
  ZigzagPiece z;
  for (Field f : factors) {
    if (is_pos_const(f)) {
      z.scale *= f->value;
      continue;
    }
    if (f->op != Op::PosPart || f->args[0]->op != Op::Sub) return std::nullopt;
    Field a = f->args[0]->args[0];
    Field b = f->args[0]->args[1];
    if (a->op == Op::Const && !z.has_lower) {
      z.has_lower = true;
      z.beta = a->value;
      z.lower = b;
    } else if (b->op == Op::Const && !z.upper) {
      z.upper = a;
      z.alpha = b->value;
    } else {
      return std::nullopt;
    }
  }
  if (!z.upper) return std::nullopt;
  return z;
}

// A sum node built from a list collapses to its only member, so S is either
// a one-member family or an Add over the members.
std::vector<std::vector<Field>> summand_readings(Field s) {
  std::vector<std::vector<Field>> out{{s}};
  if (s->op == Op::Add) out.push_back(s->args);
  return out;
}

// Returns the common normalizer S and prefix length when g is a sum of
// div(base_k, S) for the first `len` summands of S.
struct Prefix {
  Field sum;
  std::size_t count;
  std::size_t members;
};

std::optional<Prefix> normalized_prefix(Field g) {
  const auto terms = add_terms(g);
  if (terms.empty() || terms[0]->op != Op::Div) return std::nullopt;
  Field s = terms[0]->args[1];
  for (const auto& base : summand_readings(s)) {
    if (terms.size() > base.size()) continue;
    bool match = true;
    for (std::size_t k = 0; match && k < terms.size(); ++k)
      match = terms[k]->op == Op::Div && terms[k]->args[1] == s && terms[k]->args[0] == base[k];
    if (match) return Prefix{s, terms.size(), base.size()};
  }
  return std::nullopt;
}

}  // namespace

std::optional<Entailer::BoxCheck> Entailer::box_subset(const OpenSet& a, const OpenSet& b) {
  if (!has_families(a) && !has_families(b)) {
    auto w = union_difference_witness(a.box_list(), b.box_list());
    return BoxCheck{!w, Tier::Exact, w};
  }
  // Families of a that refine a family of b are covered exactly.
  std::vector<LatticeFamily> rest;
  for (const auto& f : a.families()) {
    const bool covered = std::any_of(b.families().begin(), b.families().end(),
                                     [&](const LatticeFamily& g) { return family_refines(f, g); });
    if (!covered) rest.push_back(f);
  }
  const OpenSet a_rest = OpenSet::symbolic(a.dim(), rest, a.box_list());
  if (bounded_boxes(a_rest)) {
    if (a_rest.box_list().empty()) return BoxCheck{true, Tier::Exact, std::nullopt};
    const Box bb = *bounding_box(a_rest);
    auto w = union_difference_witness(a_rest.box_list(), window_boxes(b, bb));
    return BoxCheck{!w, Tier::Exact, w};
  }
  if (!window_) return std::nullopt;
  auto w = union_difference_witness(window_boxes(a_rest, *window_), window_boxes(b, *window_));
  return BoxCheck{!w, Tier::CertifiedOnWindow, w};
}

std::optional<Entailer::BoxCheck> Entailer::box_disjoint(const OpenSet& a, const OpenSet& b) {
  std::vector<Box> xs, ys;
  Tier tier = Tier::Exact;
  if (!has_families(a) && !has_families(b)) {
    xs = a.box_list();
    ys = b.box_list();
  } else if (bounded_boxes(a) || bounded_boxes(b)) {
    const OpenSet& bnd = bounded_boxes(a) ? a : b;
    auto bb = bounding_box(bnd);
    if (!bb) return BoxCheck{true, Tier::Exact, std::nullopt};
    xs = window_boxes(a, *bb);
    ys = window_boxes(b, *bb);
  } else {
    if (!window_) return std::nullopt;
    xs = window_boxes(a, *window_);
    ys = window_boxes(b, *window_);
    tier = Tier::CertifiedOnWindow;
  }
  for (const auto& x : xs)
    for (const auto& y : ys)
      if (auto r = intersect(x, y)) return BoxCheck{false, tier, box_point(*r)};
  return BoxCheck{true, tier, std::nullopt};
}

bool Entailer::leq(Field f, Field g) {
  if (f == g) return true;
  if (f->op == Op::Const && g->op == Op::Const) return f->value <= g->value;
  if (f->op == Op::Const && f->value <= 0 && g->nonneg) return true;
  if (!g->nonneg) return false;
  auto fs = add_terms(f);
  auto gs = add_terms(g);
  std::unordered_map<Field, int> count;
  for (Field t : gs) ++count[t];
  for (Field t : fs)
    if (--count[t] < 0) return false;
  for (const auto& [t, c] : count)
    if (c > 0 && !t->nonneg) return false;
  return true;
}

std::optional<Tier> Entailer::implies(Field f, Field h) {
  if (f->dim != h->dim) throw Error(ErrorKind::DimensionMismatch, "entailment between fields of different dimension");
  const auto key = std::make_pair(f->serial, h->serial);
  if (auto it = implies_memo_.find(key); it != implies_memo_.end()) return it->second;
  implies_memo_[key] = std::nullopt;
  auto r = implies_uncached(f, h);
  implies_memo_[key] = r;
  return r;
}

std::optional<Tier> Entailer::implies_uncached(Field f, Field h) {
  if (f == h || is_pos_const(h) || is_zero_field(f)) return Tier::Exact;

  const auto sf = exact_support(f);
  const auto sh = exact_support(h);
  if (sf && sh) {
    if (auto bc = box_subset(*sf, *sh)) {
      if (bc->holds) return bc->tier;
      return std::nullopt;
    }
  }

  auto imp_h = [&](Field x) { return implies(x, h); };
  auto imp_from_f = [&](Field x) { return implies(f, x); };

  MaybeTier r;
  switch (f->op) {
    case Op::Add:
    case Op::Max: {
      std::vector<Field> parts;
      for (Field a : f->args) parts.push_back(fld::pos_part(a));
      if ((r = all_of(parts, imp_h))) return r;
      break;
    }
    case Op::Min:
    case Op::Mul:
      if (args_nonneg(f) && (r = any_of(f->args, imp_h))) return r;
      break;
    case Op::Div:
      if ((r = any_of(f->args, imp_h))) return r;
      break;
    case Op::PosPart: {
      Field x = f->args[0];
      if (x->op == Op::Sub && x->args[1]->nonneg) {
        if ((r = implies(fld::pos_part(x->args[0]), h))) return r;
      } else if (x->op == Op::Min || x->op == Op::Max) {
        std::vector<Field> parts;
        for (Field a : x->args) parts.push_back(fld::pos_part(a));
        if ((r = x->op == Op::Min ? any_of(parts, imp_h) : all_of(parts, imp_h))) return r;
      }
      break;
    }
    case Op::Clamp01:
      if ((r = implies(fld::pos_part(f->args[0]), h))) return r;
      break;
    case Op::PlCompose:
      if (pl_vanishes_off_support(f) && (r = implies(f->args[0], h))) return r;
      break;
    default:
      break;
  }

  switch (h->op) {
    case Op::Min:
    case Op::Mul:
      if (args_nonneg(h) && (r = all_of(h->args, imp_from_f))) return r;
      break;
    case Op::Div:
      if ((r = all_of(h->args, imp_from_f))) return r;
      break;
    case Op::Add:
    case Op::Max: {
      if (!args_nonneg(h)) break;
      std::vector<Field> terms;
      union_terms(h, terms);
      if ((r = any_of(terms, imp_from_f))) return r;
      if ((r = recognize_sum(f, terms))) return r;
      break;
    }
    case Op::Clamp01:
      if (h->args[0]->nonneg && (r = implies(f, h->args[0]))) return r;
      break;
    case Op::PlCompose:
      if (h->args[0]->nonneg && pl_positive_on_support(h) && (r = implies(f, h->args[0]))) return r;
      break;
    default:
      break;
  }
  return std::nullopt;
}

std::optional<Tier> Entailer::recognize_sum(Field f, const std::vector<Field>& terms) {
  const std::unordered_set<Field> present(terms.begin(), terms.end());
  auto has = [&](Field t) { return present.count(t) > 0; };
  std::unordered_set<Field> tried;

  // Normalized family: sum_i f_i/S over all summands of S is positive iff S is.
  for (Field t : terms) {
    if (t->op != Op::Div) continue;
    Field s = t->args[1];
    if (!tried.insert(s).second) continue;
    for (const auto& base : summand_readings(s))
      if (std::all_of(base.begin(), base.end(), [&](Field b) { return has(fld::div(b, s)); }))
        if (auto r = implies(f, s)) return r;
  }

  // max(0, 2 n_i - mu) over all i: the argmax index is positive wherever mu is.
  tried.clear();
  for (Field t : terms) {
    if (t->op != Op::PosPart || t->args[0]->op != Op::Sub) continue;
    Field twice = t->args[0]->args[0];
    Field mu = t->args[0]->args[1];
    if (twice->op != Op::Mul || !tried.insert(mu).second) continue;
    const std::vector<Field> list = mu->op == Op::Max ? mu->args : std::vector<Field>{mu};
    bool complete = std::all_of(list.begin(), list.end(), [](Field n) { return n->nonneg; });
    for (std::size_t i = 0; complete && i < list.size(); ++i) complete = has(pattern::mather_raw(list, i));
    if (complete)
      if (auto r = implies(f, mu)) return r;
  }

  // Disjoint refinement over all nonempty subsets: the subset of maximal
  // values is positive wherever some base member is.
  tried.clear();
  for (Field t : terms) {
    if (t->op != Op::Min || !args_nonneg(t) || t->args.size() > 16 || !tried.insert(t).second) continue;
    const auto& base = t->args;
    const std::uint64_t full = (1ULL << base.size()) - 1;
    bool complete = true;
    for (std::uint64_t mask = 1; complete && mask < full; ++mask) complete = has(pattern::disjoint_piece(base, mask));
    if (complete)
      if (auto r = implies(f, fld::add(base))) return r;
  }

  // Zigzag family over normalized prefix sums G_0 <= G_1 <= ... <= G_K = S/S.
  struct Indexed {
    ZigzagPiece z;
    std::size_t index;
    std::size_t members;
  };
  std::unordered_map<Field, std::vector<Indexed>> by_norm;
  for (Field t : terms) {
    auto z = parse_zigzag(t);
    if (!z) continue;
    auto up = normalized_prefix(z->upper);
    if (!up) continue;
    const std::size_t i = up->count - 1;
    if (i >= 2) {
      if (!z->has_lower) continue;
      auto lo = normalized_prefix(z->lower);
      if (!lo || lo->sum != up->sum || lo->count != i - 1) continue;
    } else if (z->has_lower) {
      continue;
    }
    by_norm[up->sum].push_back({*z, i, up->members});
  }
  for (auto& [s, pieces] : by_norm) {
    const std::size_t k_max = pieces.front().members - 1;
    std::vector<const ZigzagPiece*> at(k_max + 1, nullptr);
    for (const auto& p : pieces)
      if (!at[p.index]) at[p.index] = &p.z;
    bool ok = std::all_of(at.begin(), at.end(), [](const ZigzagPiece* p) { return p != nullptr; });
    if (!ok) continue;
    // Induction ⋃_{i<=k} P_i = {G_k > alpha_k} needs beta_{k-2} > alpha_{k-1};
    // G_K = 1 > alpha_K on {S > 0} finishes the coverage.
    for (std::size_t k = 2; ok && k <= k_max; ++k) ok = at[k]->beta > at[k - 1]->alpha;
    ok = ok && at[k_max]->alpha < 1;
    if (ok)
      if (auto r = implies(f, s)) return r;
  }
  return std::nullopt;
}

std::optional<Tier> Entailer::disjoint(Field f, Field g) {
  if (f->dim != g->dim) throw Error(ErrorKind::DimensionMismatch, "disjointness between fields of different dimension");
  if (g->serial < f->serial) std::swap(f, g);
  const auto key = std::make_pair(f->serial, g->serial);
  if (auto it = disjoint_memo_.find(key); it != disjoint_memo_.end()) return it->second;
  disjoint_memo_[key] = std::nullopt;
  auto r = disjoint_uncached(f, g);
  disjoint_memo_[key] = r;
  return r;
}

std::optional<Tier> Entailer::disjoint_uncached(Field f, Field g) {
  if (is_zero_field(f) || is_zero_field(g)) return Tier::Exact;

  const auto sf = exact_support(f);
  const auto sg = exact_support(g);
  if (sf && sg) {
    if (auto bc = box_disjoint(*sf, *sg)) {
      if (bc->holds) return bc->tier;
      return std::nullopt;
    }
  }

  // Contradictory strict inequalities a > b and c > d with a <= d, c <= b.
  auto facts = [&](Field x, Field y) -> bool {
    if (x->op != Op::PosPart || y->op != Op::PosPart) return false;
    Field u = x->args[0];
    Field v = y->args[0];
    if (u->op != Op::Sub || v->op != Op::Sub) return false;
    return leq(u->args[0], v->args[1]) && leq(v->args[0], u->args[1]);
  };
  if (facts(f, g)) return Tier::Exact;

  // Fast path for two disjoint-refinement pieces sharing one difference reversed.
  if (f->op == Op::PosPart && g->op == Op::PosPart && f->args[0]->op == Op::Min && g->args[0]->op == Op::Min) {
    std::unordered_set<Field> gs(g->args[0]->args.begin(), g->args[0]->args.end());
    for (Field d : f->args[0]->args)
      if (d->op == Op::Sub && gs.count(fld::sub(d->args[1], d->args[0]))) return Tier::Exact;
  }

  auto decompose = [&](Field x, Field other, bool x_first) -> MaybeTier {
    auto call = [&](Field part) { return x_first ? disjoint(part, other) : disjoint(other, part); };
    switch (x->op) {
      case Op::Add:
      case Op::Max: {
        std::vector<Field> parts;
        for (Field a : x->args) parts.push_back(fld::pos_part(a));
        return all_of(parts, call);
      }
      case Op::Min:
      case Op::Mul:
        if (args_nonneg(x)) return any_of(x->args, call);
        return std::nullopt;
      case Op::Div:
        return any_of(x->args, call);
      case Op::PosPart: {
        Field y = x->args[0];
        if (y->op == Op::Sub && y->args[1]->nonneg) return call(fld::pos_part(y->args[0]));
        if (y->op == Op::Min || y->op == Op::Max) {
          std::vector<Field> parts;
          for (Field a : y->args) parts.push_back(fld::pos_part(a));
          return y->op == Op::Min ? any_of(parts, call) : all_of(parts, call);
        }
        return std::nullopt;
      }
      case Op::Clamp01:
        return call(fld::pos_part(x->args[0]));
      case Op::PlCompose:
        if (pl_vanishes_off_support(x)) return call(x->args[0]);
        return std::nullopt;
      default:
        return std::nullopt;
    }
  };
  if (auto r = decompose(f, g, true)) return r;
  if (auto r = decompose(g, f, true)) return r;
  return std::nullopt;
}

}  // namespace coverforge
