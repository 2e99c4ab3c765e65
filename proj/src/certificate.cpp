#include "coverforge/certificate.hpp"

#include <chrono>
#include <functional>
#include <set>

#include "coverforge/euclid.hpp"

namespace coverforge {

const char* node_kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::TwoElement: return "two-element";
    case NodeKind::Disjoint: return "disjoint";
    case NodeKind::Coarsen: return "coarsen";
    case NodeKind::Compose: return "compose";
    case NodeKind::Iso: return "iso";
    case NodeKind::CubeSchema: return "cube-schema";
  }
  return "?";
}

namespace {

Cert make(CertNode n) { return std::make_shared<const CertNode>(std::move(n)); }

}  // namespace

Cert two_element(Cover c) { return make(CertNode{NodeKind::TwoElement, std::move(c), {}, {}, {}, {}, 0, {}}); }

Cert disjoint(Cover c) { return make(CertNode{NodeKind::Disjoint, std::move(c), {}, {}, {}, {}, 0, {}}); }

Cert coarsen(Cover c, Cert child, std::vector<std::size_t> r) {
  std::vector<ElementRef> refs;
  for (std::size_t i : r) refs.push_back(ElementRef{-1, i, {}});
  return make(CertNode{NodeKind::Coarsen, std::move(c), {std::move(child)}, std::move(refs), {}, {}, 0, {}});
}

Cert compose(Cert outer, std::vector<Cert> inners, std::optional<std::vector<OpenSet>> elements) {
  const Cover& o = outer->cover;
  if (inners.size() != o.size()) throw Error(ErrorKind::Malformed, "compose needs one inner certificate per outer element");
  Cover c;
  c.ambient = o.ambient;
  if (elements) {
    c.elements = std::move(*elements);
  } else {
    for (std::size_t i = 0; i < inners.size(); ++i)
      for (const auto& v : inners[i]->cover.elements) c.elements.push_back(intersect(v, o.elements[i]));
  }
  std::vector<Cert> children{std::move(outer)};
  children.insert(children.end(), inners.begin(), inners.end());
  return make(CertNode{NodeKind::Compose, std::move(c), std::move(children), {}, {}, {}, 0, {}});
}

Cert iso(Cover c, RadialMap map, Cert child) {
  return make(CertNode{NodeKind::Iso, std::move(c), {std::move(child)}, {}, {}, std::move(map), 0, {}});
}

bool leaves_are_axioms(const Cert& c) {
  if (c->kind == NodeKind::CubeSchema) return true;  // materializes to axiom leaves only
  if (c->children.empty()) return c->kind == NodeKind::TwoElement || c->kind == NodeKind::Disjoint;
  for (const auto& ch : c->children)
    if (!leaves_are_axioms(ch)) return false;
  return true;
}

std::size_t node_total(const Cert& c) {
  std::size_t n = 1;
  for (const auto& ch : c->children) n += node_total(ch);
  return n;
}

std::size_t depth(const Cert& c) {
  std::size_t d = 0;
  for (const auto& ch : c->children) d = std::max(d, depth(ch));
  return d + 1;
}

const NodeVerdict* VerificationReport::first_failure() const {
  for (const auto& n : nodes)
    if (n.tier == Tier::Failed) return &n;
  return nullptr;
}

namespace {

Tier tier_of(const SetVerdict& v) {
  switch (v.kind) {
    case SetVerdict::Kind::ExactYes: return Tier::Exact;
    case SetVerdict::Kind::CertifiedYesOnWindow: return Tier::CertifiedOnWindow;
    case SetVerdict::Kind::Inconclusive: return Tier::Heuristic;
    default: return Tier::Failed;
  }
}

// Accumulates one node's checks; the first failure keeps its witness.
struct Outcome {
  Tier tier = Tier::Exact;
  std::string detail;
  std::optional<Point> witness;

  void add(Tier t, const std::string& what, std::optional<Point> w = std::nullopt) {
    if (t == Tier::Failed && tier != Tier::Failed) {
      detail = what;
      witness = std::move(w);
    }
    tier = weakest(tier, t);
  }
  void add(const SetVerdict& v, const std::string& what) { add(tier_of(v), what, v.witness); }
  void fail(const std::string& what) { add(Tier::Failed, what); }
};

bool is_whole_set(const OpenSet& s) {
  return s.kind() == OpenSet::Kind::Boxes && s.box_list().size() == 1 && s.box_list()[0].is_whole();
}

class Verifier {
 public:
  explicit Verifier(VerificationReport& report) : report_(report) {}

  void run(const Cert& node, const std::string& path, const SamplePlan& plan) {
    if (!node) {
      report_.nodes.push_back({path, NodeKind::Disjoint, Tier::Failed, "dangling child", std::nullopt, 0});
      return;
    }
    const auto start = std::chrono::steady_clock::now();
    const std::size_t slot = report_.nodes.size();
    report_.nodes.push_back({path, node->kind, Tier::Exact, "", std::nullopt, 0});
    Outcome out;
    try {
      check(*node, path, plan, out);
    } catch (const Error& e) {
      out.fail(std::string("malformed: ") + e.what());
    }
    auto& v = report_.nodes[slot];
    v.tier = out.tier;
    v.detail = out.detail;
    v.witness = out.witness;
    v.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }

 private:
  Entailer& ctx(const SamplePlan& plan) {
    const std::string key = window_key(plan.window);
    auto it = contexts_.find(key);
    if (it == contexts_.end()) it = contexts_.emplace(key, std::make_unique<Entailer>(plan.window)).first;
    return *it->second;
  }

  static std::string window_key(const Box& w) {
    std::string k;
    for (const auto& iv : w.axes()) k += to_string(iv.lo) + "," + to_string(iv.hi) + ";";
    return k;
  }

  SetVerdict inclusion(const OpenSet& a, const OpenSet& b, const SamplePlan& plan) {
    if (a == b || is_whole_set(b) || a.is_empty_boxes()) return {SetVerdict::Kind::ExactYes, std::nullopt};
    return subset_of(a, b, plan, &ctx(plan));
  }

  // ambient ⊂ target on the window; exact when the ambient lies inside the window.
  SetVerdict coverage(const OpenSet& ambient, const OpenSet& target, const SamplePlan& plan) {
    Entailer& e = ctx(plan);
    const OpenSet window = OpenSet::box(plan.window);
    if (ambient.box_representable())
      if (auto inside = e.box_subset(ambient, window); inside && inside->holds && inside->tier == Tier::Exact)
        return inclusion(ambient, target, plan);
    SetVerdict v = inclusion(intersect(ambient, window), target, plan);
    if (v.kind == SetVerdict::Kind::ExactYes) v.kind = SetVerdict::Kind::CertifiedYesOnWindow;
    if (v.kind == SetVerdict::Kind::ExactNo) v.kind = SetVerdict::Kind::RefutedBySample;
    return v;
  }

  static OpenSet all_elements(const Cover& c) {
    std::vector<OpenSet> parts = c.elements;
    if (!c.schemas.empty()) parts.push_back(OpenSet::symbolic(c.dim(), c.schemas));
    if (parts.empty()) return OpenSet::empty(c.dim());
    return unite(parts, c.dim());
  }

  void check_partition(const Cover& c, const SamplePlan& plan, Outcome& out) {
    const auto& p = *c.partition;
    if (p.size() != c.size()) return out.fail("partition size differs from cover size");
    for (std::size_t i = 0; i < p.size(); ++i)
      out.add(inclusion(intersect(OpenSet::positive(p[i]), c.ambient), c.elements[i], plan),
              "partition member " + std::to_string(i) + " is not compatible");
  }

  void check_coverage(const Cover& c, const SamplePlan& plan, Outcome& out) {
    OpenSet target = all_elements(c);
    if (c.partition && c.schemas.empty())
      target = OpenSet::positive(c.partition->empty() ? fld::zero(c.dim()) : fld::add(*c.partition));
    out.add(coverage(c.ambient, target, plan), "elements do not cover the ambient");
  }

  void check(const CertNode& n, const std::string& path, const SamplePlan& plan, Outcome& out) {
    if (n.cover.dim() != plan.window.dim()) throw Error(ErrorKind::DimensionMismatch, "window dimension");
    switch (n.kind) {
      case NodeKind::TwoElement: return check_two(n, plan, out);
      case NodeKind::Disjoint: return check_disjoint(n, plan, out);
      case NodeKind::Coarsen: return check_coarsen(n, path, plan, out);
      case NodeKind::Compose: return check_compose(n, path, plan, out);
      case NodeKind::Iso: return check_iso(n, path, plan, out);
      case NodeKind::CubeSchema: return check_cube(n, path, plan, out);
    }
  }

  void check_two(const CertNode& n, const SamplePlan& plan, Outcome& out) {
    const Cover& c = n.cover;
    if (c.size() != 2 || !c.schemas.empty()) return out.fail("two-element node needs exactly two elements");
    if (!c.partition) return out.fail("two-element node carries no partition");
    check_partition(c, plan, out);
    check_coverage(c, plan, out);
    if (n.slab_axis && !matches_canonical_slab(n)) out.fail("not the canonical slab cover on its axis");
  }

  void check_disjoint(const CertNode& n, const SamplePlan& plan, Outcome& out) {
    const Cover& c = n.cover;
    Entailer& e = ctx(plan);
    for (const auto& fam : c.schemas)
      if (!fam.separated()) out.fail("lattice schema instances may overlap");
    std::vector<OpenSet> parts = c.elements;
    for (const auto& fam : c.schemas) parts.push_back(OpenSet::symbolic(c.dim(), {fam}));
    for (std::size_t i = 0; i < parts.size(); ++i)
      for (std::size_t j = i + 1; j < parts.size(); ++j) {
        auto [t, w] = pair_disjoint(parts[i], parts[j], c.ambient, plan, e);
        out.add(t, "elements " + std::to_string(i) + " and " + std::to_string(j) + " meet", std::move(w));
        if (out.tier == Tier::Failed) return;
      }
    if (c.partition) check_partition(c, plan, out);
    check_coverage(c, plan, out);
  }

  std::pair<Tier, std::optional<Point>> pair_disjoint(const OpenSet& a, const OpenSet& b, const OpenSet& ambient,
                                                      const SamplePlan& plan, Entailer& e) {
    if (a.is_empty_boxes() || b.is_empty_boxes()) return {Tier::Exact, std::nullopt};
    if (a.box_representable() && b.box_representable()) {
      if (auto r = e.box_disjoint(a, b); r && r->holds) return {r->tier, std::nullopt};
      if (ambient.box_representable())
        if (auto r = e.box_disjoint(intersect(a, ambient), b); r && r->holds) return {r->tier, std::nullopt};
    }
    if (auto t = e.disjoint(indicator(a), indicator(b))) return {*t, std::nullopt};
    if (auto t = e.disjoint(fld::min({indicator(a), indicator(ambient)}), indicator(b))) return {*t, std::nullopt};
    // Sampling can only refute.
    Evaluator ev({indicator(a), indicator(b), indicator(ambient)});
    for (const auto& x : sample_points(plan)) {
      const auto& v = ev(x);
      if (v[0] > 0 && v[1] > 0 && v[2] > 0) return {Tier::Failed, x};
    }
    return {Tier::Heuristic, std::nullopt};
  }

  std::optional<Box> element_box(const Cover& c, const ElementRef& r) {
    if (r.schema < 0) {
      if (r.index >= c.size()) return std::nullopt;
      const OpenSet& e = c.elements[r.index];
      if (e.kind() == OpenSet::Kind::Boxes && e.box_list().size() == 1) return e.box_list()[0];
      return std::nullopt;
    }
    if (static_cast<std::size_t>(r.schema) >= c.schemas.size()) return std::nullopt;
    return c.schemas[static_cast<std::size_t>(r.schema)].instance(r.instance);
  }

  OpenSet element_set(const Cover& c, const ElementRef& r) {
    if (r.schema < 0) {
      if (r.index >= c.size()) throw Error(ErrorKind::Malformed, "refinement target out of range");
      return c.elements[r.index];
    }
    auto b = element_box(c, r);
    if (!b) throw Error(ErrorKind::Malformed, "refinement target instance is empty");
    return OpenSet::box(*b);
  }

  // child element ⊂ target element of the parent, through the parent's map if any.
  void refines(const OpenSet& v, const Cover& parent, const ElementRef& r, const SamplePlan& plan, Outcome& out,
               const std::string& what) {
    if (parent.image_of) {
      if (v.kind() != OpenSet::Kind::Boxes) return out.fail(what + ": image witness needs boxes");
      for (const auto& b : v.box_list()) {
        auto w = image_box_witness(parent, *parent.image_of, b);
        if (!w) return out.add(Tier::Failed, what + ": no element contains the preimage", b.center());
        if (!(*w == r)) {
          // A different element also works; the recorded one must be checked.
          Cover single = parent;
          single.elements.clear();
          single.schemas.clear();
          single.elements.push_back(element_set(parent, r));
          if (!image_box_witness(single, *parent.image_of, b))
            return out.add(Tier::Failed, what + ": recorded element does not contain the preimage", b.center());
        }
      }
      return out.add(Tier::Exact, what);
    }
    out.add(inclusion(intersect(v, parent.ambient), element_set(parent, r), plan), what);
  }

  void check_coarsen(const CertNode& n, const std::string& path, const SamplePlan& plan, Outcome& out) {
    if (n.children.size() != 1) return out.fail("coarsen needs one child");
    const Cert& child = n.children[0];
    const Cover& cc = child->cover;
    const Cover& pc = n.cover;
    if (pc.image_of && !cc.image_of) {
      if (!is_whole_set(pc.ambient) || !is_whole_set(cc.ambient)) out.fail("mapped coarsening needs whole ambients");
    } else if (pc.image_of != cc.image_of) {
      out.fail("child and parent live in different coordinates");
    } else {
      out.add(inclusion(pc.ambient, cc.ambient, plan), "child ambient does not contain the ambient");
    }
    if (n.refinement.size() != cc.size()) return out.fail("refinement map size differs from child cover size");
    for (std::size_t j = 0; j < cc.size(); ++j) {
      refines(cc.elements[j], pc, n.refinement[j], plan, out, "child element " + std::to_string(j) + " not inside its target");
      if (out.tier == Tier::Failed) break;
    }
    if (cc.schemas.size() > 1) out.fail("coarsening over several lattice schemas");
    if (cc.schemas.size() == 1 && out.tier != Tier::Failed) {
      for (const auto& m : cc.schemas[0].indices_meeting(plan.window)) {
        auto it = n.lattice_refinement.find(m);
        if (it == n.lattice_refinement.end()) {
          out.add(Tier::Failed, "no refinement witness for a lattice instance", cc.schemas[0].instance(m)->center());
          break;
        }
        refines(OpenSet::box(*cc.schemas[0].instance(m)), pc, it->second, plan, out, "lattice instance not inside its target");
        if (out.tier == Tier::Failed) break;
      }
      out.add(Tier::CertifiedOnWindow, "");
    }
    run(child, path + "/0", plan);
  }

  void check_compose(const CertNode& n, const std::string& path, const SamplePlan& plan, Outcome& out) {
    if (n.children.empty()) return out.fail("compose without outer certificate");
    const Cover& o = n.children[0]->cover;
    if (!o.schemas.empty()) return out.fail("compose over a lattice-indexed outer cover");
    if (n.children.size() != o.size() + 1) return out.fail("compose needs one inner certificate per outer element");
    if (o.image_of != n.cover.image_of) out.fail("outer cover lives in different coordinates");
    out.add(inclusion(n.cover.ambient, o.ambient, plan), "outer ambient does not contain the ambient");
    std::size_t k = 0;
    for (std::size_t i = 0; i < o.size(); ++i) {
      const Cover& inner = n.children[i + 1]->cover;
      if (!inner.schemas.empty()) return out.fail("compose over a lattice-indexed inner cover");
      out.add(inclusion(o.elements[i], inner.ambient, plan), "inner ambient " + std::to_string(i) + " misses its outer element");
      for (const auto& v : inner.elements) {
        if (k >= n.cover.size()) return out.fail("composite cover has too few elements");
        const OpenSet& w = n.cover.elements[k];
        const OpenSet meet = intersect(v, o.elements[i]);
        if (!(meet == w)) out.add(inclusion(intersect(meet, n.cover.ambient), w, plan), "composite element " + std::to_string(k) + " too small");
        ++k;
      }
    }
    if (k != n.cover.size()) out.fail("composite cover has extra elements");
    for (std::size_t i = 0; i < n.children.size(); ++i) run(n.children[i], path + "/" + std::to_string(i), plan);
  }

  void check_iso(const CertNode& n, const std::string& path, const SamplePlan& plan, Outcome& out) {
    if (!n.map || n.children.size() != 1) return out.fail("iso needs a map and one child");
    const RadialMap& m = *n.map;
    if (m.dim != n.cover.dim() || !m.monotone()) return out.fail("radial map is not monotone and positive");
    Cover expect = n.cover;
    expect.image_of = m;
    const Cover& cc = n.children[0]->cover;
    if (!(cc.ambient == expect.ambient && cc.elements == expect.elements && cc.schemas == expect.schemas && cc.image_of == m))
      return out.fail("child cover is not the image of this cover");
    // Radii sampled across the window's norm range.
    const Rational reach = max_abs_coord(plan.window);
    const Rational top = sqrt_upper(Rational(plan.window.dim()) * reach * reach);
    std::vector<Rational> radii;
    const std::size_t count = std::min<std::size_t>(plan.count, 1000);
    for (std::size_t k = 1; k <= count; ++k) radii.push_back(top * Rational(static_cast<long>(k), static_cast<long>(count)));
    for (auto& r : radii) r.canonicalize();
    if (!check_radial_inverse(m, radii)) return out.fail("forward and inverse radius maps disagree");
    out.add(Tier::CertifiedOnWindow, "");
    SamplePlan image = plan;
    image.window = image_window(m, plan.window);
    run(n.children[0], path + "/0", image);
  }

  void check_cube(const CertNode& n, const std::string& path, const SamplePlan& plan, Outcome& out) {
    const std::size_t dim = n.cube_dim;
    if (!is_whole_set(n.cover.ambient) || n.cover.dim() != dim || !n.cover.elements.empty() ||
        n.cover.schemas != std::vector<LatticeFamily>{cube_family(dim)})
      return out.fail("cube schema does not certify the cube cover");
    const Cert inst = materialize_cube(dim, plan.window);
    // The instance certifies the cubes meeting the window.
    const auto idx = cube_family(dim).indices_meeting(plan.window);
    if (inst->cover.size() != idx.size()) return out.fail("instantiation lost cubes");
    std::set<std::string> expected;
    for (const auto& m : idx) expected.insert(window_key(*cube_family(dim).instance(m)));
    for (const auto& e : inst->cover.elements)
      if (e.kind() != OpenSet::Kind::Boxes || e.box_list().size() != 1 || !expected.count(window_key(e.box_list()[0])))
        return out.fail("instantiated element differs from the schema instances");
    out.add(Tier::CertifiedOnWindow, "");
    run(inst, path + "/window", plan);
  }

  VerificationReport& report_;
  std::map<std::string, std::unique_ptr<Entailer>> contexts_;
};

}  // namespace

VerificationReport verify(const Cert& root, const SamplePlan& plan) {
  if (!plan.window.bounded() && plan.window.dim() > 0) throw Error(ErrorKind::EmptyWindow, "verification needs a bounded window");
  VerificationReport report;
  const auto start = std::chrono::steady_clock::now();
  Verifier v(report);
  v.run(root, "root", plan);
  for (const auto& n : report.nodes) report.aggregate = weakest(report.aggregate, n.tier);
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace coverforge
