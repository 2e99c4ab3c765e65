#include "coverforge/refine.hpp"

#include <algorithm>
#include <numeric>

#include "coverforge/patterns.hpp"

namespace coverforge {

namespace {

const std::vector<Field>& require_partition(const Cover& c) {
  if (!c.finite()) throw Error(ErrorKind::Unsupported, "lattice-indexed cover; truncate to a window first");
  if (!c.partition) throw Error(ErrorKind::InvalidArgument, "cover has no partition");
  if (c.partition->size() != c.size()) throw Error(ErrorKind::Malformed, "partition size differs from cover size");
  return *c.partition;
}

}  // namespace

MatherResult mather(const std::vector<Field>& f) {
  if (f.empty()) throw Error(ErrorKind::InvalidArgument, "mather of an empty family");
  MatherResult m;
  m.input = pattern::normalized(f);
  m.mu = fld::max(m.input);
  for (std::size_t i = 0; i < f.size(); ++i) m.raw.push_back(pattern::mather_raw(m.input, i));
  m.members = pattern::normalized(m.raw);
  return m;
}

Cover mather(const Cover& c) {
  const auto& p = require_partition(c);
  if (p.empty()) return c;
  Cover out = c;
  out.partition = mather(p).members;
  return out;
}

FinitenessWitness local_finiteness_witness(const MatherResult& m, const Point& x) {
  std::vector<Field> roots = m.input;
  roots.push_back(m.mu);
  Evaluator ev(roots);
  const auto& v = ev(x);
  const std::size_t n = m.input.size();
  const Rational half_mu = v[n] / 2;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  // Take the largest values until what is left is below mu/2.
  Rational rest = std::accumulate(v.begin(), v.begin() + static_cast<long>(n), Rational(0));
  FinitenessWitness w;
  for (std::size_t i : order) {
    if (rest < half_mu) break;
    w.active.push_back(i);
    rest -= v[i];
  }
  std::sort(w.active.begin(), w.active.end());
  std::vector<Field> terms{fld::scale(Rational(1, 2), m.mu)};
  for (std::size_t i : w.active) terms.push_back(m.input[i]);
  w.h = fld::sub(fld::add(terms), fld::one(m.mu->dim));
  return w;
}

std::string subset_label(std::uint64_t mask, std::size_t n) {
  std::string s = "{";
  bool first = true;
  for (std::size_t k = 0; k < n; ++k) {
    if (!(mask >> k & 1)) continue;
    s += (first ? "" : ",") + std::to_string(k);
    first = false;
  }
  return s + "}";
}

Disjointified disjointify(const Cover& c) {
  const auto& base = require_partition(c);
  const std::size_t n = base.size();
  if (n > 20) throw Error(ErrorKind::Unsupported, "disjointify supports at most 20 members");
  Disjointified d;
  d.base = base;
  d.cover.ambient = c.ambient;
  d.cover.partition.emplace();
  if (n == 0) return d;
  for (std::uint64_t mask = 1; mask < (1ULL << n); ++mask) {
    const Field g = pattern::disjoint_piece(base, mask);
    d.cover.elements.push_back(OpenSet::positive(g));
    d.cover.partition->push_back(g);
    d.cover.labels.push_back(subset_label(mask, n));
    d.masks.push_back(mask);
    d.cardinality.push_back(static_cast<std::size_t>(__builtin_popcountll(mask)));
  }
  return d;
}

long ZigzagParams::last() const {
  return static_cast<long>(std::min({alpha.size(), beta.size(), gamma.size()})) - 3;
}

bool ZigzagParams::valid() const {
  const long top = last();
  if (top < -2) return false;
  for (long i = -2; i <= top; ++i) {
    if (!(1 > a(i) && a(i) > b(i) && b(i) > c(i) && b(i) > 0)) return false;
    if (i < top && !(c(i) > a(i + 1))) return false;
  }
  return true;
}

ZigzagParams default_zigzag_params(long last) {
  ZigzagParams p;
  for (long i = -2; i <= last; ++i) {
    const Rational unit = pow2(-3 * (i + 3));
    p.alpha.push_back(3 * unit);
    p.beta.push_back(2 * unit);
    p.gamma.push_back(unit);
  }
  return p;
}

ZigzagResult zigzag_refine(const Cover& chain, const ZigzagParams& params, const SamplePlan& plan) {
  const auto& f = require_partition(chain);
  const long n = static_cast<long>(f.size());
  if (!params.valid() || params.last() < n - 1) throw Error(ErrorKind::InvalidArgument, "invalid zigzag parameters");
  Entailer ctx(plan.window);
  for (long i = 0; i + 1 < n; ++i) {
    const auto v = subset_of(chain.elements[i], chain.elements[i + 1], plan, &ctx);
    if (v.refuted()) throw Error(ErrorKind::InvalidArgument, "cover is not a chain at index " + std::to_string(i));
  }

  ZigzagResult z;
  z.cover.ambient = chain.ambient;
  z.cover.partition.emplace();
  const std::size_t dim = chain.dim();
  if (n == 0) return z;
  const auto normed = pattern::normalized(f);
  for (long i = 0; i < n; ++i) z.levels.push_back(prefix_sum(normed, i, dim));
  auto level = [&](long i) { return i < 0 ? fld::zero(dim) : z.levels[static_cast<std::size_t>(i)]; };
  for (long i = 0; i < n; ++i) {
    const Field h = pattern::zigzag_term(i, level(i - 2), params.b(i - 2), level(i), params.a(i));
    z.cover.elements.push_back(OpenSet::positive(h));
    z.cover.partition->push_back(h);
    z.cover.labels.push_back("P" + std::to_string(i));
  }
  return z;
}

Cover chain_from_countable(const Cover& c) {
  const auto& f = require_partition(c);
  Cover out;
  out.ambient = c.ambient;
  out.partition = f;
  for (std::size_t i = 0; i < f.size(); ++i) {
    out.elements.push_back(OpenSet::positive(prefix_sum(f, static_cast<long>(i), c.dim())));
    out.labels.push_back("A" + std::to_string(i));
  }
  return out;
}

}  // namespace coverforge
