#include "coverforge/decompose.hpp"

#include <numeric>

namespace coverforge {

namespace {

const std::vector<Field>& partition_of(const Cover& c) {
  if (!c.partition) throw Error(ErrorKind::InvalidArgument, "cover carries no partition of unity");
  if (c.partition->size() != c.size()) throw Error(ErrorKind::InvalidArgument, "partition size differs from the cover");
  return *c.partition;
}

Cover with(OpenSet ambient, std::vector<OpenSet> elements, std::vector<Field> partition) {
  Cover c = make_cover(std::move(ambient), std::move(elements));
  c.partition = std::move(partition);
  return c;
}

Cert empty_certificate(const Cover& c) {
  return disjoint(with(c.ambient, {}, {}));
}

std::vector<std::size_t> identity(std::size_t n) {
  std::vector<std::size_t> r(n);
  std::iota(r.begin(), r.end(), 0);
  return r;
}

bool boxes_disjoint(const Cover& c) {
  for (const auto& e : c.elements)
    if (e.kind() != OpenSet::Kind::Boxes) return false;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j)
      if (!intersect(c.elements[i], c.elements[j]).is_empty_boxes()) return false;
  return true;
}

// {f > 0} as boxes when the field's structure allows it.
OpenSet support(const Field& f) {
  if (auto s = exact_support(f)) return *s;
  return OpenSet::positive(f);
}

}  // namespace

Cert decompose_zigzag(const Cover& z) {
  const auto& h = partition_of(z);
  const std::size_t dim = z.dim();
  std::vector<std::size_t> even, odd;
  for (std::size_t i = 0; i < h.size(); ++i) (i % 2 == 0 ? even : odd).push_back(i);
  const Field he = partial_sum(h, even, dim), ho = partial_sum(h, odd, dim);
  const OpenSet a = OpenSet::positive(he), b = OpenSet::positive(ho);
  const Cert split = two_element(with(z.ambient, {a, b}, {he, ho}));

  auto members = [&](const std::vector<std::size_t>& idx, const OpenSet& amb) {
    std::vector<OpenSet> els;
    std::vector<Field> part;
    for (auto i : idx) {
      els.push_back(z.elements[i]);
      part.push_back(h[i]);
    }
    return disjoint(with(amb, els, part));
  };
  std::vector<OpenSet> composite;
  std::vector<std::size_t> refinement;
  for (auto i : even) composite.push_back(z.elements[i]), refinement.push_back(i);
  for (auto i : odd) composite.push_back(z.elements[i]), refinement.push_back(i);
  const Cert whole = compose(split, {members(even, a), members(odd, b)}, composite);
  return coarsen(z, whole, refinement);
}

Cert decompose_chain(const Cover& chain, const SamplePlan& plan) {
  return decompose_chain(chain, default_zigzag_params(static_cast<long>(chain.size()) + 2), plan);
}

Cert decompose_chain(const Cover& chain, const ZigzagParams& params, const SamplePlan& plan) {
  partition_of(chain);
  if (chain.ambient.is_empty_boxes() || chain.size() == 0) return coarsen(chain, empty_certificate(chain), {});
  const ZigzagResult z = zigzag_refine(chain, params, plan);
  return coarsen(chain, decompose_zigzag(z.cover), identity(chain.size()));
}

Cert decompose_finite(const Cover& c) {
  const auto& f = partition_of(c);
  const std::size_t n = c.size(), dim = c.dim();
  if (n == 0) return empty_certificate(c);
  const std::size_t last = n - 1;
  const std::vector<std::size_t> rest = identity(last);
  const Field head = partial_sum(f, rest, dim);
  std::vector<OpenSet> heads(c.elements.begin(), c.elements.begin() + static_cast<long>(last));
  const OpenSet a = intersect(intersect(support(head), unite(heads, dim)), c.ambient);

  const Cert split = two_element(with(c.ambient, {a, c.elements[last]}, {head, f[last]}));
  std::vector<OpenSet> inner_elements;
  std::vector<Field> inner_partition;
  for (auto i : rest) {
    inner_elements.push_back(intersect(c.elements[i], a));
    inner_partition.push_back(f[i]);
  }
  const Cert inner = decompose_finite(with(a, inner_elements, inner_partition));
  // No partition on the singleton: f_last may vanish inside its element.
  const Cert tail = disjoint(make_cover(c.elements[last], {c.elements[last]}));
  std::vector<OpenSet> composite = inner_elements;
  composite.push_back(c.elements[last]);
  return coarsen(c, compose(split, {inner, tail}, composite), identity(n));
}

Cert decompose_countable(const Cover& input, const SamplePlan& plan) {
  const Cover c = input.finite() ? input : truncate(input, plan.window);
  const auto& f = partition_of(c);
  const std::size_t n = c.size();
  if (n == 0) return empty_certificate(c);
  const Cover chain = chain_from_countable(c);
  const Cert chain_cert = decompose_chain(chain, plan);

  std::vector<Cert> inners;
  std::vector<OpenSet> composite;
  std::vector<std::size_t> refinement;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<OpenSet> els;
    std::vector<Field> part;
    for (std::size_t k = 0; k <= i; ++k) {
      els.push_back(intersect(c.elements[k], chain.elements[i]));
      part.push_back(f[k]);
      refinement.push_back(k);
    }
    composite.insert(composite.end(), els.begin(), els.end());
    inners.push_back(decompose_finite(with(chain.elements[i], els, part)));
  }
  return coarsen(c, compose(chain_cert, std::move(inners), composite), refinement);
}

Cert decompose(const Cover& input, const SamplePlan& plan) {
  const Cover c = input.finite() ? input : truncate(input, plan.window);
  partition_of(c);
  const std::size_t n = c.size(), dim = c.dim();
  if (n == 0) return empty_certificate(c);
  if (boxes_disjoint(c)) return coarsen(c, disjoint(c), identity(n));

  const MatherResult m = mather(*c.partition);
  Cover fine = c;
  fine.partition = m.members;
  const Disjointified d = disjointify(fine);

  std::vector<OpenSet> levels;
  std::vector<Field> level_partition;
  std::vector<Cert> inners;
  std::vector<OpenSet> composite;
  std::vector<std::size_t> refinement;
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < d.masks.size(); ++j)
      if (d.cardinality[j] == k) idx.push_back(j);
    const Field h = partial_sum(*d.cover.partition, idx, dim);
    const OpenSet w = OpenSet::positive(h);
    levels.push_back(w);
    level_partition.push_back(h);
    std::vector<OpenSet> els;
    std::vector<Field> part;
    for (auto j : idx) {
      els.push_back(d.cover.elements[j]);
      part.push_back((*d.cover.partition)[j]);
      refinement.push_back(static_cast<std::size_t>(__builtin_ctzll(d.masks[j])));
    }
    composite.insert(composite.end(), els.begin(), els.end());
    inners.push_back(disjoint(with(w, els, part)));
  }
  const Cert outer = decompose_countable(with(c.ambient, levels, level_partition), plan);
  return coarsen(c, compose(outer, std::move(inners), composite), refinement);
}

}  // namespace coverforge
