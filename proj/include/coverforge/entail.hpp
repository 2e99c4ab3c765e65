#pragma once

#include <map>
#include <optional>
#include <utility>

#include "coverforge/field.hpp"
#include "coverforge/open_set.hpp"

namespace coverforge {

enum class Tier { Exact, CertifiedOnWindow, Heuristic, Failed };

const char* tier_name(Tier t);
/// The weaker of two tiers (Failed is weakest).
Tier weakest(Tier a, Tier b);

/// Structural proofs about positivity sets of nonnegative fields. Every
/// returned tier is a proof; nullopt means no proof was found, not a refutation.
/// Box-arithmetic steps over lattice families are only decided on the window,
/// which downgrades the tier to CertifiedOnWindow.
class Entailer {
 public:
  explicit Entailer(std::optional<Box> window = std::nullopt) : window_(std::move(window)) {}

  /// {f > 0} ⊂ {h > 0}.
  std::optional<Tier> implies(Field f, Field h);
  /// {f > 0} ∩ {g > 0} = ∅.
  std::optional<Tier> disjoint(Field f, Field g);
  /// Provably f <= g pointwise.
  bool leq(Field f, Field g);

  /// Exact box-set inclusion; nullopt when a lattice family needs a window
  /// and none is set. The witness, if any, is a point of a outside b.
  struct BoxCheck {
    bool holds;
    Tier tier;
    std::optional<Point> witness;
  };
  std::optional<BoxCheck> box_subset(const OpenSet& a, const OpenSet& b);
  std::optional<BoxCheck> box_disjoint(const OpenSet& a, const OpenSet& b);

  const std::optional<Box>& window() const { return window_; }

 private:
  std::optional<Tier> implies_uncached(Field f, Field h);
  std::optional<Tier> disjoint_uncached(Field f, Field g);
  std::optional<Tier> recognize_sum(Field f, const std::vector<Field>& terms);

  std::optional<Box> window_;
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::optional<Tier>> implies_memo_;
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::optional<Tier>> disjoint_memo_;
};

}  // namespace coverforge
