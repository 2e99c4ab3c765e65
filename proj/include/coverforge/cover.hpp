#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coverforge/open_set.hpp"
#include "coverforge/radial.hpp"
#include "coverforge/setops.hpp"

namespace coverforge {

/// Indexed family of open sets over an ambient set. Elements are read
/// relative to the ambient: element i stands for elements[i] ∩ ambient.
struct Cover {
  OpenSet ambient;
  std::vector<OpenSet> elements;
  /// Every instance of every schema is a further element (lattice index).
  std::vector<LatticeFamily> schemas;
  /// One nonnegative field per finite element, compatible with it.
  std::optional<std::vector<Field>> partition;
  std::vector<std::string> labels;
  /// When set, the cover is the image of (ambient, elements) under this map.
  std::optional<RadialMap> image_of;

  std::size_t dim() const { return ambient.dim(); }
  bool finite() const { return schemas.empty(); }
  std::size_t size() const { return elements.size(); }

  friend bool operator==(const Cover&, const Cover&) = default;
};

Cover make_cover(OpenSet ambient, std::vector<OpenSet> elements);

/// Sum of the tents of each element's constituent boxes and families.
Field tent_field(const OpenSet& s);
/// Attaches the tent partition; field elements are unsupported.
Cover tent_partition(Cover c);

/// Σ_{i in indices} p[i]; the empty selection is the zero field.
Field partial_sum(const std::vector<Field>& p, const std::vector<std::size_t>& indices, std::size_t dim);
/// Σ_{i <= last} p[i]; last < 0 gives zero.
Field prefix_sum(const std::vector<Field>& p, long last, std::size_t dim);

/// Materializes the schema instances meeting the bounded window as finite
/// elements (with tent members when a partition is present) and restricts the
/// ambient to the window.
Cover truncate(const Cover& c, const Box& window);

struct CoverReport {
  SetVerdict coverage{SetVerdict::Kind::Inconclusive, std::nullopt};
  /// Per element: {partition_i > 0} ⊂ element_i, when a partition is present.
  std::vector<SetVerdict> compatibility;
  /// Index of a failing element and its witness, if any.
  std::optional<std::size_t> failed_element;
  bool ok() const;
};

/// Coverage and partition compatibility on the plan window.
CoverReport check_cover(const Cover& c, const SamplePlan& plan);

}  // namespace coverforge
