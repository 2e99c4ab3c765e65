#include "coverforge/euclid.hpp"

namespace coverforge {

Cover canonical_slabs(std::size_t n, std::size_t axis) {
  if (axis >= n) throw Error(ErrorKind::InvalidArgument, "slab axis out of range");
  Cover c;
  c.ambient = OpenSet::whole(n);
  c.elements = {OpenSet::symbolic(n, {LatticeFamily::slab(n, axis, 0, 3, 4)}),
                OpenSet::symbolic(n, {LatticeFamily::slab(n, axis, 2, 5, 4)})};
  c.partition = std::vector<Field>{tent_field(c.elements[0]), tent_field(c.elements[1])};
  c.labels = {"U", "V"};
  return c;
}

LatticeFamily cube_family(std::size_t n) {
  std::vector<std::vector<AxisConstraint>> axes(n);
  for (std::size_t i = 0; i < n; ++i) axes[i].push_back({Extended(0L), Extended(3L), static_cast<int>(i), 2});
  return LatticeFamily(n, n, std::move(axes));
}

Cert cube_certificate(std::size_t n) {
  CertNode node{NodeKind::CubeSchema, {}, {}, {}, {}, {}, n, {}};
  node.cover.ambient = OpenSet::whole(n);
  node.cover.schemas = {cube_family(n)};
  return std::make_shared<const CertNode>(std::move(node));
}

namespace {

Box block_box(std::size_t n, std::size_t k, const Index& m) {
  std::vector<Interval> axes(n, Interval{Extended::neg_inf(), Extended::pos_inf()});
  for (std::size_t i = k; i < n; ++i) axes[i] = {Extended(Rational(2 * m[i - k])), Extended(Rational(2 * m[i - k] + 3))};
  return Box(std::move(axes));
}

// j with (2j, 2j+3) meeting (lo, hi).
std::vector<long> slab_range(const Interval& w) {
  mpz_class first, last;
  const Rational a = (w.lo.value() - 3) / 2;
  const Rational b = w.hi.value() / 2;
  mpz_fdiv_q(first.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
  mpz_cdiv_q(last.get_mpz_t(), b.get_num_mpz_t(), b.get_den_mpz_t());
  std::vector<long> out;
  for (long j = first.get_si() + 1; j < last.get_si(); ++j) out.push_back(j);
  return out;
}

Cert block_certificate(std::size_t n, std::size_t k, const Index& m, const Box& window) {
  const Box a = block_box(n, k, m);
  if (k == 0) return disjoint(make_cover(OpenSet::box(a), {OpenSet::box(a)}));
  const std::size_t axis = k - 1;
  const Cover slabs = canonical_slabs(n, axis);
  const OpenSet amb = OpenSet::box(a);
  Cover two = make_cover(amb, {intersect(slabs.elements[0], amb), intersect(slabs.elements[1], amb)});
  two.partition = std::vector<Field>{tent_field(two.elements[0]), tent_field(two.elements[1])};
  two.labels = slabs.labels;
  CertNode t{NodeKind::TwoElement, two, {}, {}, {}, {}, 0, axis};

  std::vector<OpenSet> even, odd;
  std::vector<Index> even_idx, odd_idx;
  for (long j : slab_range(window[axis])) {
    Index sub{j};
    sub.insert(sub.end(), m.begin(), m.end());
    (j % 2 == 0 ? even : odd).push_back(OpenSet::box(block_box(n, k - 1, sub)));
    (j % 2 == 0 ? even_idx : odd_idx).push_back(sub);
  }
  const Cert dp = disjoint(make_cover(two.elements[0], even));
  const Cert dq = disjoint(make_cover(two.elements[1], odd));
  std::vector<OpenSet> blocks = even;
  blocks.insert(blocks.end(), odd.begin(), odd.end());
  const Cert slabs_node = compose(std::make_shared<const CertNode>(std::move(t)), {dp, dq}, blocks);

  std::vector<Cert> inners;
  for (const auto& sub : even_idx) inners.push_back(block_certificate(n, k - 1, sub, window));
  for (const auto& sub : odd_idx) inners.push_back(block_certificate(n, k - 1, sub, window));
  return compose(slabs_node, std::move(inners));
}

}  // namespace

Cert materialize_cube(std::size_t n, const Box& window) {
  if (window.dim() != n || !window.bounded()) throw Error(ErrorKind::EmptyWindow, "cube instantiation needs a bounded window");
  return block_certificate(n, n, {}, window);
}

bool matches_canonical_slab(const CertNode& node) {
  if (!node.slab_axis || node.cover.size() != 2) return false;
  const Cover slabs = canonical_slabs(node.cover.dim(), *node.slab_axis);
  for (std::size_t i = 0; i < 2; ++i)
    if (!(intersect(slabs.elements[i], node.cover.ambient) == node.cover.elements[i])) return false;
  return true;
}

std::optional<ElementRef> image_box_witness(const Cover& c, const RadialMap& map, const Box& box) {
  if (!box.bounded()) return std::nullopt;
  const Point z = box.center();
  Rational half = 0;
  for (const auto& iv : box.axes()) {
    const Rational w = (iv.hi.value() - iv.lo.value()) / 2;
    half += w * w;
  }
  const Rational t = sqrt_upper(half);
  const Rational n2 = squared_norm(z);
  Point x(z.size());
  Rational eps = 0, r_lo = 0;
  if (n2 > 0) {
    const Rational nl = sqrt_lower(n2), nu = sqrt_upper(n2);
    r_lo = map.inverse_radius_lower(nl);
    const Rational r_hi = map.inverse_radius_upper(nu);
    const Rational lambda = r_lo / nu;
    for (std::size_t i = 0; i < z.size(); ++i) x[i] = lambda * z[i];
    eps = nu * (r_hi / nl - r_lo / nu);
  }
  const Extended need(Rational(preimage_radius(map, r_lo, t) + eps));
  for (std::size_t i = 0; i < c.size(); ++i) {
    const OpenSet& e = c.elements[i];
    if (!e.box_representable()) continue;
    for (const auto& b : e.box_list())
      if (ball_radius_in(b, x) >= need) return ElementRef{-1, i, {}};
    for (const auto& fam : e.families())
      for (const auto& m : fam.indices_containing(x))
        if (ball_radius_in(*fam.instance(m), x) >= need) return ElementRef{-1, i, {}};
  }
  for (std::size_t s = 0; s < c.schemas.size(); ++s)
    for (const auto& m : c.schemas[s].indices_containing(x))
      if (ball_radius_in(*c.schemas[s].instance(m), x) >= need) return ElementRef{static_cast<long>(s), 0, m};
  return std::nullopt;
}

Box image_window(const RadialMap& map, const Box& window) {
  const Rational reach = max_abs_coord(window);
  const Rational norm = sqrt_upper(Rational(window.dim()) * reach * reach);
  const Rational t = map.radius(norm);
  mpz_class top;
  mpz_cdiv_q(top.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
  const Rational side(top + 1);
  return Box(std::vector<Interval>(window.dim(), Interval{Extended(Rational(-side)), Extended(side)}));
}

EuclidResult euclid_decompose(const Cover& c, const Box& window, const Rational& delta) {
  const std::size_t n = c.dim();
  if (!(c.ambient == OpenSet::whole(n))) throw Error(ErrorKind::InvalidArgument, "euclid_decompose needs a cover of the whole space");
  if (window.dim() != n || !window.bounded()) throw Error(ErrorKind::EmptyWindow, "euclid_decompose needs a bounded window");
  const Rational reach = max_abs_coord(window);
  // Cubes meeting the image window pull back to norms below n·reach + 1/2.
  const Rational d_max = Rational(n) * reach + 1;
  const PLFunction profile = lebesgue_profile(c, d_max, delta);
  EuclidResult out;
  out.rescaler = build_rescaler(profile, n);
  // Dilation: a rational ceiling of 3·sqrt(n) on the 2^-10 grid.
  const Rational root = sqrt_upper(Rational(9 * static_cast<long>(n)));
  mpz_class units;
  const Rational scaled = root * 1024;
  mpz_cdiv_q(units.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  Rational dilation(units, 1024);
  dilation.canonicalize();
  out.map = out.rescaler.map(dilation);
  out.image_window = image_window(out.map, window);

  Cover image = c;
  image.image_of = out.map;
  CertNode node{NodeKind::Coarsen, image, {cube_certificate(n)}, {}, {}, {}, 0, {}};
  const LatticeFamily cubes = cube_family(n);
  for (const auto& m : cubes.indices_meeting(out.image_window)) {
    const Box q = *cubes.instance(m);
    auto w = image_box_witness(c, out.map, q);
    if (!w) {
      std::string where;
      for (const auto& x : q.center()) where += (where.empty() ? "" : ",") + to_string(x);
      throw Error(ErrorKind::CoverageGap, "no element contains the preimage of the cube centered at (" + where + ")");
    }
    node.lattice_refinement.emplace(m, *w);
  }
  out.certificate = iso(c, out.map, std::make_shared<const CertNode>(std::move(node)));
  return out;
}

}  // namespace coverforge
