#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coverforge/entail.hpp"
#include "coverforge/open_set.hpp"
#include "coverforge/sampling.hpp"

namespace coverforge {

struct SetVerdict {
  enum class Kind { ExactYes, ExactNo, CertifiedYesOnWindow, RefutedBySample, Inconclusive };

  Kind kind;
  std::optional<Point> witness;

  bool refuted() const { return kind == Kind::ExactNo || kind == Kind::RefutedBySample; }
  bool proved() const { return kind == Kind::ExactYes || kind == Kind::CertifiedYesOnWindow; }
  /// Verification tier carried by this verdict (Failed for refutations).
  Tier tier() const;
};

const char* verdict_name(SetVerdict::Kind k);

struct BnbOptions {
  std::size_t max_boxes = 4096;
};

/// a ⊂ b. Box operands use exact arithmetic (lattice families on the plan
/// window); field operands go through the entailment engine, then
/// branch-and-bound on the window, then sampling.
SetVerdict subset_of(const OpenSet& a, const OpenSet& b, const SamplePlan& plan, Entailer* ctx = nullptr,
                     BnbOptions bnb = {});

/// ambient ⊂ ⋃ family, judged on the plan window.
SetVerdict covers(const std::vector<OpenSet>& family, const OpenSet& ambient, const SamplePlan& plan);

}  // namespace coverforge
