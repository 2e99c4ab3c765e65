#include "coverforge/setops.hpp"

#include <deque>

namespace coverforge {

Tier SetVerdict::tier() const {
  switch (kind) {
    case Kind::ExactYes: return Tier::Exact;
    case Kind::CertifiedYesOnWindow: return Tier::CertifiedOnWindow;
    case Kind::Inconclusive: return Tier::Heuristic;
    default: return Tier::Failed;
  }
}

const char* verdict_name(SetVerdict::Kind k) {
  switch (k) {
    case SetVerdict::Kind::ExactYes: return "ExactYes";
    case SetVerdict::Kind::ExactNo: return "ExactNo";
    case SetVerdict::Kind::CertifiedYesOnWindow: return "CertifiedYesOnWindow";
    case SetVerdict::Kind::RefutedBySample: return "RefutedBySample";
    case SetVerdict::Kind::Inconclusive: return "Inconclusive";
  }
  return "?";
}

namespace {

bool usable_window(const Box& w, std::size_t dim) { return w.dim() == dim && w.bounded(); }

struct BnbResult {
  bool resolved = false;
  std::optional<Point> witness;
};

BnbResult branch_and_bound(Field fa, Field fb, const Box& window, const Rational& step, std::size_t max_boxes) {
  BnbResult out;
  std::deque<Box> queue{window};
  std::size_t processed = 0;
  bool unresolved = false;
  while (!queue.empty()) {
    Box q = std::move(queue.front());
    queue.pop_front();
    ++processed;
    const Bounds ba = bounds(fa, q);
    if (ba.hi <= Extended(0L)) continue;
    const Bounds bb = bounds(fb, q);
    if (bb.lo > Extended(0L)) continue;
    const Point c = q.center();
    if (eval(fa, c) > 0 && eval(fb, c) <= 0) {
      out.witness = c;
      return out;
    }
    std::size_t axis = 0;
    Rational widest = -1;
    for (std::size_t i = 0; i < q.dim(); ++i) {
      const Rational w = q[i].hi.value() - q[i].lo.value();
      if (w > widest) {
        widest = w;
        axis = i;
      }
    }
    if (widest <= step || processed + queue.size() >= max_boxes) {
      unresolved = true;
      continue;
    }
    const Rational mid = (q[axis].lo.value() + q[axis].hi.value()) / 2;
    auto left = q.axes();
    auto right = q.axes();
    left[axis].hi = Extended(mid);
    right[axis].lo = Extended(mid);
    queue.emplace_back(std::move(left));
    queue.emplace_back(std::move(right));
  }
  out.resolved = !unresolved;
  return out;
}

}  // namespace

SetVerdict subset_of(const OpenSet& a, const OpenSet& b, const SamplePlan& plan, Entailer* ctx, BnbOptions bnb) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "subset_of dimension mismatch");
  const bool have_window = usable_window(plan.window, a.dim());
  Entailer local(have_window ? std::optional<Box>(plan.window) : std::nullopt);
  Entailer& e = ctx ? *ctx : local;

  using K = SetVerdict::Kind;
  if (a.box_representable() && b.box_representable()) {
    if (auto bc = e.box_subset(a, b)) {
      if (!bc->holds) return {K::ExactNo, bc->witness};
      return {bc->tier == Tier::Exact ? K::ExactYes : K::CertifiedYesOnWindow, std::nullopt};
    }
    return {K::Inconclusive, std::nullopt};
  }

  const Field fa = indicator(a);
  const Field fb = indicator(b);
  const auto sa = exact_support(fa);
  const auto sb = exact_support(fb);
  if (sa && sb) {
    if (auto bc = e.box_subset(*sa, *sb)) {
      if (!bc->holds) return {K::RefutedBySample, bc->witness};
      return {bc->tier == Tier::Exact ? K::ExactYes : K::CertifiedYesOnWindow, std::nullopt};
    }
  }
  if (auto t = e.implies(fa, fb)) return {*t == Tier::Exact ? K::ExactYes : K::CertifiedYesOnWindow, std::nullopt};
  if (!have_window) return {K::Inconclusive, std::nullopt};

  const BnbResult r = branch_and_bound(fa, fb, plan.window, plan.step, bnb.max_boxes);
  if (r.witness) return {K::RefutedBySample, r.witness};
  if (r.resolved) return {K::CertifiedYesOnWindow, std::nullopt};

  Evaluator ev({fa, fb});
  for (const auto& x : sample_points(plan)) {
    const auto& v = ev(x);
    if (v[0] > 0 && v[1] <= 0) return {K::RefutedBySample, x};
  }
  return {K::Inconclusive, std::nullopt};
}

SetVerdict covers(const std::vector<OpenSet>& family, const OpenSet& ambient, const SamplePlan& plan) {
  if (!usable_window(plan.window, ambient.dim())) throw Error(ErrorKind::EmptyWindow, "covers needs a bounded window");
  const OpenSet u = family.empty() ? OpenSet::empty(ambient.dim()) : unite(family, ambient.dim());
  const OpenSet amb = intersect(ambient, OpenSet::box(plan.window));
  SetVerdict v = subset_of(amb, u, plan);
  using K = SetVerdict::Kind;
  if (v.kind == K::ExactYes) v.kind = K::CertifiedYesOnWindow;
  if (v.kind == K::ExactNo) v.kind = K::RefutedBySample;
  return v;
}

}  // namespace coverforge
