#include "coverforge/field.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <mutex>
#include <unordered_map>
#include <unordered_set>

namespace coverforge {

const char* op_name(Op op) {
  switch (op) {
    case Op::Const: return "const";
    case Op::Coord: return "coord";
    case Op::Add: return "add";
    case Op::Sub: return "sub";
    case Op::Mul: return "mul";
    case Op::Div: return "div";
    case Op::Min: return "min";
    case Op::Max: return "max";
    case Op::PosPart: return "pos";
    case Op::Clamp01: return "clamp01";
    case Op::Tent: return "tent";
    case Op::LatticeTent: return "lattice_tent";
    case Op::PlCompose: return "pl";
  }
  return "?";
}

namespace {

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

std::size_t hash_q(const Rational& q) {
  return mix(mpz_get_ui(q.get_num_mpz_t()) ^ (mpz_sgn(q.get_num_mpz_t()) < 0 ? 0xabcdULL : 0),
             mpz_get_ui(q.get_den_mpz_t()));
}

std::size_t hash_e(const Extended& e) {
  return e.finite() ? hash_q(e.value()) : (e.is_neg_inf() ? 0x1111ULL : 0x2222ULL);
}

std::size_t hash_node(const FieldNode& n) {
  std::size_t h = mix(static_cast<std::size_t>(n.op), n.dim);
  for (Field a : n.args) h = mix(h, std::hash<const void*>{}(a));
  h = mix(h, hash_q(n.value));
  h = mix(h, static_cast<std::size_t>(n.coord + 1));
  for (const auto& iv : n.box.axes()) h = mix(mix(h, hash_e(iv.lo)), hash_e(iv.hi));
  h = mix(h, n.family.arity());
  for (const auto& list : n.family.axes())
    for (const auto& c : list) h = mix(mix(h, hash_e(c.lo)), hash_e(c.hi));
  for (const auto& x : n.pl.xs()) h = mix(h, hash_q(x));
  for (const auto& y : n.pl.ys()) h = mix(h, hash_q(y));
  return h;
}

bool same_node(const FieldNode& a, const FieldNode& b) {
  return a.op == b.op && a.dim == b.dim && a.args == b.args && a.value == b.value && a.coord == b.coord &&
         a.box == b.box && a.family == b.family && a.pl == b.pl;
}

struct Arena {
  std::mutex mu;
  std::deque<FieldNode> nodes;
  std::unordered_multimap<std::size_t, const FieldNode*> index;
};

Arena& arena() {
  static Arena a;
  return a;
}

Field intern(FieldNode proto) {
  const std::size_t h = hash_node(proto);
  Arena& a = arena();
  std::lock_guard lock(a.mu);
  auto [it, end] = a.index.equal_range(h);
  for (; it != end; ++it)
    if (same_node(*it->second, proto)) return it->second;
  proto.serial = a.nodes.size();
  a.nodes.push_back(std::move(proto));
  const FieldNode* p = &a.nodes.back();
  a.index.emplace(h, p);
  return p;
}

FieldNode proto(Op op, std::size_t dim, std::vector<Field> args = {}) {
  FieldNode n{op, dim, 0, false, std::move(args), Rational(0), -1, Box(), LatticeFamily(), PLFunction()};
  return n;
}

std::size_t common_dim(const std::vector<Field>& fs) {
  if (fs.empty()) throw Error(ErrorKind::InvalidArgument, "empty field list");
  for (Field f : fs)
    if (f->dim != fs.front()->dim) throw Error(ErrorKind::DimensionMismatch, "field dimension mismatch");
  return fs.front()->dim;
}

bool is_const(Field f, const Rational& c) { return f->op == Op::Const && f->value == c; }

}  // namespace

namespace fld {

Field constant(std::size_t dim, const Rational& c) {
  auto n = proto(Op::Const, dim);
  n.value = c;
  n.nonneg = c >= 0;
  return intern(std::move(n));
}

Field zero(std::size_t dim) { return constant(dim, Rational(0)); }
Field one(std::size_t dim) { return constant(dim, Rational(1)); }

Field coord(std::size_t dim, std::size_t axis) {
  if (axis >= dim) throw Error(ErrorKind::InvalidArgument, "coordinate axis out of range");
  auto n = proto(Op::Coord, dim);
  n.coord = static_cast<int>(axis);
  return intern(std::move(n));
}

Field add(std::vector<Field> terms) {
  const std::size_t dim = common_dim(terms);
  std::erase_if(terms, [](Field f) { return is_const(f, Rational(0)); });
  if (terms.empty()) return zero(dim);
  if (terms.size() == 1) return terms.front();
  auto n = proto(Op::Add, dim, terms);
  n.nonneg = std::all_of(terms.begin(), terms.end(), [](Field f) { return f->nonneg; });
  return intern(std::move(n));
}

Field sub(Field a, Field b) {
  const std::size_t dim = common_dim({a, b});
  if (is_const(b, Rational(0))) return a;
  if (a->op == Op::Const && b->op == Op::Const) return constant(dim, a->value - b->value);
  auto n = proto(Op::Sub, dim, {a, b});
  return intern(std::move(n));
}

Field mul(std::vector<Field> factors) {
  const std::size_t dim = common_dim(factors);
  for (Field f : factors)
    if (is_const(f, Rational(0))) return zero(dim);
  std::erase_if(factors, [](Field f) { return is_const(f, Rational(1)); });
  if (factors.empty()) return one(dim);
  if (factors.size() == 1) return factors.front();
  auto n = proto(Op::Mul, dim, factors);
  n.nonneg = std::all_of(factors.begin(), factors.end(), [](Field f) { return f->nonneg; });
  return intern(std::move(n));
}

Field scale(const Rational& c, Field f) { return mul({constant(f->dim, c), f}); }

Field div(Field a, Field b) {
  const std::size_t dim = common_dim({a, b});
  if (!a->nonneg || !b->nonneg) throw Error(ErrorKind::InvalidArgument, "div requires nonnegative operands");
  if (is_const(a, Rational(0))) return zero(dim);
  if (is_const(b, Rational(1))) return a;
  auto n = proto(Op::Div, dim, {a, b});
  n.nonneg = true;
  return intern(std::move(n));
}

Field min(std::vector<Field> terms) {
  const std::size_t dim = common_dim(terms);
  if (terms.size() == 1) return terms.front();
  auto n = proto(Op::Min, dim, terms);
  n.nonneg = std::all_of(terms.begin(), terms.end(), [](Field f) { return f->nonneg; });
  return intern(std::move(n));
}

Field max(std::vector<Field> terms) {
  const std::size_t dim = common_dim(terms);
  if (terms.size() == 1) return terms.front();
  auto n = proto(Op::Max, dim, terms);
  n.nonneg = std::any_of(terms.begin(), terms.end(), [](Field f) { return f->nonneg; });
  return intern(std::move(n));
}

Field pos_part(Field a) {
  if (a->nonneg) return a;
  if (a->op == Op::Const) return constant(a->dim, a->value > 0 ? a->value : Rational(0));
  auto n = proto(Op::PosPart, a->dim, {a});
  n.nonneg = true;
  return intern(std::move(n));
}

Field clamp01(Field a) {
  auto n = proto(Op::Clamp01, a->dim, {a});
  n.nonneg = true;
  return intern(std::move(n));
}

Field tent(const Box& b) {
  if (b.is_whole()) return one(b.dim());
  auto n = proto(Op::Tent, b.dim());
  n.box = b;
  n.nonneg = true;
  return intern(std::move(n));
}

Field lattice_tent(const LatticeFamily& f) {
  if (!f.locally_finite()) throw Error(ErrorKind::InvalidArgument, "lattice tent sum needs a locally finite family");
  auto n = proto(Op::LatticeTent, f.dim());
  n.family = f;
  n.nonneg = true;
  return intern(std::move(n));
}

Field compose(const PLFunction& pl, Field a) {
  if (!pl.nondecreasing() && !pl.nonincreasing())
    throw Error(ErrorKind::InvalidArgument, "composition needs a monotone PL function");
  auto n = proto(Op::PlCompose, a->dim, {a});
  n.pl = pl;
  n.nonneg = pl.tail_slope() >= 0 && pl.min_value() >= 0 && pl.nondecreasing();
  return intern(std::move(n));
}

}  // namespace fld

std::vector<Field> add_terms(Field f) {
  std::vector<Field> out;
  std::function<void(Field)> walk = [&](Field g) {
    if (g->op == Op::Add) {
      for (Field a : g->args) walk(a);
    } else {
      out.push_back(g);
    }
  };
  walk(f);
  return out;
}

std::size_t node_count(Field f) {
  std::unordered_set<Field> seen;
  std::vector<Field> stack{f};
  while (!stack.empty()) {
    Field g = stack.back();
    stack.pop_back();
    if (!seen.insert(g).second) continue;
    for (Field a : g->args) stack.push_back(a);
  }
  return seen.size();
}

namespace {

// Per-axis factor max(0, min(x - lo, hi - x, 1)).
void tent_factor(const Interval& iv, const Rational& x, Rational& out) {
  out = 1;
  if (iv.lo.finite()) {
    const Rational d = x - iv.lo.value();
    if (d < out) out = d;
  }
  if (iv.hi.finite()) {
    const Rational d = iv.hi.value() - x;
    if (d < out) out = d;
  }
  if (out < 0) out = 0;
}

void tent_value(const Box& b, const Point& x, Rational& out) {
  out = 1;
  Rational f;
  for (std::size_t i = 0; i < b.dim(); ++i) {
    tent_factor(b[i], x[i], f);
    if (sgn(f) == 0) {
      out = 0;
      return;
    }
    out *= f;
  }
}

}  // namespace

Evaluator::Evaluator(std::vector<Field> roots) {
  std::unordered_map<Field, std::uint32_t> slot;
  std::function<std::uint32_t(Field)> visit = [&](Field f) -> std::uint32_t {
    if (auto it = slot.find(f); it != slot.end()) return it->second;
    Instr ins{f, {}};
    for (Field a : f->args) ins.args.push_back(visit(a));
    const auto s = static_cast<std::uint32_t>(code_.size());
    code_.push_back(std::move(ins));
    slot.emplace(f, s);
    return s;
  };
  for (Field r : roots) root_slots_.push_back(visit(r));
  slots_.resize(code_.size());
  out_.resize(root_slots_.size());
}

const std::vector<Rational>& Evaluator::operator()(const Point& x) {
  Rational tmp;
  for (std::size_t s = 0; s < code_.size(); ++s) {
    const Instr& ins = code_[s];
    const FieldNode& n = *ins.node;
    Rational& v = slots_[s];
    switch (n.op) {
      case Op::Const: v = n.value; break;
      case Op::Coord: v = x.at(static_cast<std::size_t>(n.coord)); break;
      case Op::Add:
        v = slots_[ins.args[0]];
        for (std::size_t k = 1; k < ins.args.size(); ++k) v += slots_[ins.args[k]];
        break;
      case Op::Sub: v = slots_[ins.args[0]] - slots_[ins.args[1]]; break;
      case Op::Mul:
        v = slots_[ins.args[0]];
        for (std::size_t k = 1; k < ins.args.size() && sgn(v) != 0; ++k) v *= slots_[ins.args[k]];
        break;
      case Op::Div:
        if (sgn(slots_[ins.args[1]]) == 0) {
          v = 0;
        } else {
          v = slots_[ins.args[0]] / slots_[ins.args[1]];
        }
        break;
      case Op::Min: {
        std::uint32_t best = ins.args[0];
        for (std::size_t k = 1; k < ins.args.size(); ++k)
          if (slots_[ins.args[k]] < slots_[best]) best = ins.args[k];
        v = slots_[best];
        break;
      }
      case Op::Max: {
        std::uint32_t best = ins.args[0];
        for (std::size_t k = 1; k < ins.args.size(); ++k)
          if (slots_[ins.args[k]] > slots_[best]) best = ins.args[k];
        v = slots_[best];
        break;
      }
      case Op::PosPart:
        v = slots_[ins.args[0]];
        if (sgn(v) < 0) v = 0;
        break;
      case Op::Clamp01:
        v = slots_[ins.args[0]];
        if (sgn(v) < 0) v = 0;
        if (v > 1) v = 1;
        break;
      case Op::Tent: tent_value(n.box, x, v); break;
      case Op::LatticeTent:
        v = 0;
        for (const auto& m : n.family.indices_containing(x)) {
          tent_value(*n.family.instance(m), x, tmp);
          v += tmp;
        }
        break;
      case Op::PlCompose: v = n.pl(slots_[ins.args[0]]); break;
    }
  }
  for (std::size_t k = 0; k < root_slots_.size(); ++k) out_[k] = slots_[root_slots_[k]];
  return out_;
}

Rational eval(Field f, const Point& x) {
  if (x.size() != f->dim) throw Error(ErrorKind::DimensionMismatch, "point/field dimension mismatch");
  thread_local std::unordered_map<Field, std::unique_ptr<Evaluator>> cache;
  auto& ev = cache[f];
  if (!ev) ev = std::make_unique<Evaluator>(std::vector<Field>{f});
  return (*ev)(x)[0];
}

namespace {

Extended ext_abs(const Extended& e) { return e < Extended(0L) ? -e : e; }

Extended div_pos(const Extended& a, const Rational& b) {
  if (!a.finite()) return a;
  return Extended(Rational(a.value() / b));
}

struct FactorRange {
  Rational lo, hi;
};

Rational tent_factor_at(const Interval& iv, const Rational& x) {
  Rational r;
  tent_factor(iv, x, r);
  return r;
}

FactorRange tent_factor_range(const Interval& iv, const Interval& w) {
  const Rational l = w.lo.value();
  const Rational u = w.hi.value();
  const Rational fl = tent_factor_at(iv, l);
  const Rational fu = tent_factor_at(iv, u);
  Rational peak;
  if (iv.lo.finite() && iv.hi.finite()) {
    Rational mid = (iv.lo.value() + iv.hi.value()) / 2;
    if (mid < l) mid = l;
    if (mid > u) mid = u;
    peak = tent_factor_at(iv, mid);
  } else if (iv.lo.finite()) {
    peak = fu;
  } else if (iv.hi.finite()) {
    peak = fl;
  } else {
    peak = 1;
  }
  // Between the clamped peak and each endpoint the factor is monotone.
  return {fl < fu ? fl : fu, peak};
}

void tent_bounds(const Box& b, const Box& w, Bounds& out) {
  const std::size_t n = b.dim();
  std::vector<FactorRange> fr(n);
  for (std::size_t i = 0; i < n; ++i) fr[i] = tent_factor_range(b[i], w[i]);
  Rational lo = 1, hi = 1;
  for (const auto& r : fr) {
    lo *= r.lo;
    hi *= r.hi;
  }
  out.lo = Extended(lo);
  out.hi = Extended(hi);
  out.lip.assign(n, Extended(0L));
  for (std::size_t j = 0; j < n; ++j) {
    if (b[j].lo.is_neg_inf() && b[j].hi.is_pos_inf()) continue;
    Rational l = 1;
    for (std::size_t k = 0; k < n; ++k)
      if (k != j) l *= fr[k].hi;
    out.lip[j] = Extended(l);
  }
}

bool is_summand(Field a, Field b) {
  if (a == b) return true;
  for (Field t : add_terms(b))
    if (t == a) return true;
  return false;
}

class BoundsComputer {
 public:
  explicit BoundsComputer(const Box& w) : w_(w) {}

  const Bounds& get(Field f) {
    if (auto it = memo_.find(f); it != memo_.end()) return it->second;
    Bounds b = compute(f);
    return memo_.emplace(f, std::move(b)).first->second;
  }

 private:
  Bounds compute(Field f) {
    const std::size_t n = f->dim;
    Bounds r;
    r.lip.assign(n, Extended(0L));
    switch (f->op) {
      case Op::Const:
        r.lo = r.hi = Extended(f->value);
        break;
      case Op::Coord:
        r.lo = w_[static_cast<std::size_t>(f->coord)].lo;
        r.hi = w_[static_cast<std::size_t>(f->coord)].hi;
        r.lip[static_cast<std::size_t>(f->coord)] = Extended(1L);
        break;
      case Op::Add: {
        r.lo = r.hi = Extended(0L);
        for (Field a : f->args) {
          const Bounds& b = get(a);
          r.lo = r.lo + b.lo;
          r.hi = r.hi + b.hi;
          for (std::size_t j = 0; j < n; ++j) r.lip[j] = r.lip[j] + b.lip[j];
        }
        break;
      }
      case Op::Sub: {
        const Bounds& a = get(f->args[0]);
        const Bounds& b = get(f->args[1]);
        r.lo = a.lo - b.hi;
        r.hi = a.hi - b.lo;
        for (std::size_t j = 0; j < n; ++j) r.lip[j] = a.lip[j] + b.lip[j];
        break;
      }
      case Op::Mul: {
        std::vector<const Bounds*> bs;
        for (Field a : f->args) bs.push_back(&get(a));
        r.lo = bs[0]->lo;
        r.hi = bs[0]->hi;
        for (std::size_t k = 1; k < bs.size(); ++k) {
          const Extended c[4] = {r.lo * bs[k]->lo, r.lo * bs[k]->hi, r.hi * bs[k]->lo, r.hi * bs[k]->hi};
          r.lo = min(min(c[0], c[1]), min(c[2], c[3]));
          r.hi = max(max(c[0], c[1]), max(c[2], c[3]));
        }
        for (std::size_t t = 0; t < bs.size(); ++t) {
          Extended others(1L);
          for (std::size_t s = 0; s < bs.size(); ++s)
            if (s != t) others = others * max(ext_abs(bs[s]->lo), ext_abs(bs[s]->hi));
          for (std::size_t j = 0; j < n; ++j) r.lip[j] = r.lip[j] + bs[t]->lip[j] * others;
        }
        break;
      }
      case Op::Div: {
        const Bounds& a = get(f->args[0]);
        const Bounds& b = get(f->args[1]);
        if (b.lo.finite() && b.lo.value() > 0) {
          const Rational blo = b.lo.value();
          r.lo = b.hi.finite() ? div_pos(a.lo, b.hi.value()) : Extended(0L);
          r.hi = div_pos(a.hi, blo);
          for (std::size_t j = 0; j < n; ++j)
            r.lip[j] = div_pos(a.lip[j], blo) + a.hi * div_pos(b.lip[j], Rational(blo * blo));
        } else {
          r.lo = Extended(0L);
          r.hi = Extended::pos_inf();
          for (auto& l : r.lip) l = Extended::pos_inf();
        }
        if (is_summand(f->args[0], f->args[1])) r.hi = min(r.hi, Extended(1L));
        break;
      }
      case Op::Min:
      case Op::Max: {
        const bool is_min = f->op == Op::Min;
        for (std::size_t k = 0; k < f->args.size(); ++k) {
          const Bounds& b = get(f->args[k]);
          if (k == 0) {
            r.lo = b.lo;
            r.hi = b.hi;
          } else if (is_min) {
            r.lo = min(r.lo, b.lo);
            r.hi = min(r.hi, b.hi);
          } else {
            r.lo = max(r.lo, b.lo);
            r.hi = max(r.hi, b.hi);
          }
          for (std::size_t j = 0; j < n; ++j) r.lip[j] = max(r.lip[j], b.lip[j]);
        }
        break;
      }
      case Op::PosPart: {
        const Bounds& a = get(f->args[0]);
        r.lo = max(a.lo, Extended(0L));
        r.hi = max(a.hi, Extended(0L));
        r.lip = a.lip;
        break;
      }
      case Op::Clamp01: {
        const Bounds& a = get(f->args[0]);
        r.lo = min(max(a.lo, Extended(0L)), Extended(1L));
        r.hi = min(max(a.hi, Extended(0L)), Extended(1L));
        r.lip = a.lip;
        break;
      }
      case Op::Tent:
        tent_bounds(f->box, w_, r);
        break;
      case Op::LatticeTent: {
        r.lo = r.hi = Extended(0L);
        for (const auto& m : f->family.indices_meeting(w_)) {
          Bounds t;
          tent_bounds(*f->family.instance(m), w_, t);
          r.lo = r.lo + t.lo;
          r.hi = r.hi + t.hi;
          for (std::size_t j = 0; j < n; ++j) r.lip[j] = r.lip[j] + t.lip[j];
        }
        break;
      }
      case Op::PlCompose: {
        const Bounds& a = get(f->args[0]);
        auto at = [&](const Extended& e) -> Extended {
          if (e.finite()) return Extended(f->pl(e.value()));
          const Rational s = f->pl.tail_slope();
          if (e.is_neg_inf()) return Extended(f->pl.ys().front());
          if (s == 0) return Extended(f->pl.ys().back());
          return s > 0 ? Extended::pos_inf() : Extended::neg_inf();
        };
        const Extended x = at(a.lo), y = at(a.hi);
        r.lo = min(x, y);
        r.hi = max(x, y);
        const Extended slope(f->pl.max_abs_slope());
        for (std::size_t j = 0; j < n; ++j) r.lip[j] = slope * a.lip[j];
        break;
      }
    }
    return r;
  }

  const Box& w_;
  std::unordered_map<Field, Bounds> memo_;
};

}  // namespace

Bounds bounds(Field f, const Box& window) {
  if (window.dim() != f->dim) throw Error(ErrorKind::DimensionMismatch, "window/field dimension mismatch");
  if (!window.bounded()) throw Error(ErrorKind::EmptyWindow, "bounds need a bounded window");
  BoundsComputer bc(window);
  return bc.get(f);
}

Extended euclidean_lipschitz(const std::vector<Extended>& lip) {
  Rational s = 0;
  for (const auto& l : lip) {
    if (!l.finite()) return Extended::pos_inf();
    s += l.value() * l.value();
  }
  return Extended(sqrt_upper(s, 30));
}

}  // namespace coverforge
