#include "coverforge/cover.hpp"

namespace coverforge {

Cover make_cover(OpenSet ambient, std::vector<OpenSet> elements) {
  for (const auto& e : elements)
    if (e.dim() != ambient.dim()) throw Error(ErrorKind::DimensionMismatch, "cover element dimension");
  Cover c;
  c.ambient = std::move(ambient);
  c.elements = std::move(elements);
  return c;
}

Field tent_field(const OpenSet& s) {
  if (!s.box_representable()) throw Error(ErrorKind::Unsupported, "no canonical tent for a field open set");
  std::vector<Field> parts;
  for (const auto& f : s.families()) parts.push_back(fld::lattice_tent(f));
  for (const auto& b : s.box_list()) parts.push_back(fld::tent(b));
  if (parts.empty()) return fld::zero(s.dim());
  return fld::add(std::move(parts));
}

Cover tent_partition(Cover c) {
  std::vector<Field> p;
  for (const auto& e : c.elements) p.push_back(tent_field(e));
  c.partition = std::move(p);
  return c;
}

Field partial_sum(const std::vector<Field>& p, const std::vector<std::size_t>& indices, std::size_t dim) {
  std::vector<Field> terms;
  for (std::size_t i : indices) terms.push_back(p.at(i));
  if (terms.empty()) return fld::zero(dim);
  return fld::add(std::move(terms));
}

Field prefix_sum(const std::vector<Field>& p, long last, std::size_t dim) {
  std::vector<std::size_t> idx;
  for (long i = 0; i <= last; ++i) idx.push_back(static_cast<std::size_t>(i));
  return partial_sum(p, idx, dim);
}

Cover truncate(const Cover& c, const Box& window) {
  if (!window.bounded() || window.dim() != c.dim()) throw Error(ErrorKind::EmptyWindow, "truncate needs a bounded window");
  Cover out = c;
  out.schemas.clear();
  out.ambient = intersect(c.ambient, OpenSet::box(window));
  for (const auto& fam : c.schemas) {
    for (const auto& m : fam.indices_meeting(window)) {
      const Box b = *fam.instance(m);
      out.elements.push_back(OpenSet::box(b));
      if (out.partition) out.partition->push_back(fld::tent(b));
      if (!out.labels.empty()) {
        std::string label = "[";
        for (std::size_t k = 0; k < m.size(); ++k) label += (k ? "," : "") + std::to_string(m[k]);
        out.labels.push_back(label + "]");
      }
    }
  }
  return out;
}

bool CoverReport::ok() const {
  if (coverage.refuted() || failed_element) return false;
  for (const auto& v : compatibility)
    if (v.refuted()) return false;
  return true;
}

CoverReport check_cover(const Cover& c, const SamplePlan& plan) {
  if (!c.finite()) throw Error(ErrorKind::Unsupported, "check_cover needs a finite cover; truncate first");
  CoverReport r;
  Entailer ctx(plan.window);
  if (c.partition) {
    const auto& p = *c.partition;
    if (p.size() != c.size()) throw Error(ErrorKind::Malformed, "partition size differs from cover size");
    for (std::size_t i = 0; i < p.size(); ++i) {
      const OpenSet lhs = intersect(OpenSet::positive(p[i]), c.ambient);
      r.compatibility.push_back(subset_of(lhs, c.elements[i], plan, &ctx));
      if (r.compatibility.back().refuted() && !r.failed_element) r.failed_element = i;
    }
    const Field total = p.empty() ? fld::zero(c.dim()) : fld::add(p);
    const OpenSet amb = intersect(c.ambient, OpenSet::box(plan.window));
    r.coverage = subset_of(amb, OpenSet::positive(total), plan, &ctx);
  } else {
    r.coverage = covers(c.elements, c.ambient, plan);
  }
  if (r.coverage.kind == SetVerdict::Kind::ExactYes) r.coverage.kind = SetVerdict::Kind::CertifiedYesOnWindow;
  if (r.coverage.kind == SetVerdict::Kind::ExactNo) r.coverage.kind = SetVerdict::Kind::RefutedBySample;
  return r;
}

}  // namespace coverforge
