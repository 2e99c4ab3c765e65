#pragma once

#include <optional>
#include <vector>

#include "coverforge/field.hpp"
#include "coverforge/geometry.hpp"

namespace coverforge {

class OpenSet {
 public:
  enum class Kind { Boxes, Symbolic, Field };

  OpenSet() = default;

  static OpenSet empty(std::size_t dim);
  static OpenSet whole(std::size_t dim);
  static OpenSet boxes(std::size_t dim, std::vector<Box> boxes);
  static OpenSet box(const Box& b) { return boxes(b.dim(), {b}); }
  static OpenSet symbolic(std::size_t dim, std::vector<LatticeFamily> families, std::vector<Box> boxes = {});
  /// {x : h(x) > 0}; h must be syntactically nonnegative.
  static OpenSet positive(Field h);

  Kind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  const std::vector<Box>& box_list() const { return boxes_; }
  const std::vector<LatticeFamily>& families() const { return families_; }
  Field field() const { return field_; }

  bool box_representable() const { return kind_ != Kind::Field; }
  bool is_empty_boxes() const { return kind_ == Kind::Boxes && boxes_.empty(); }
  bool contains(const Point& x) const;

  friend bool operator==(const OpenSet&, const OpenSet&) = default;

 private:
  Kind kind_ = Kind::Boxes;
  std::size_t dim_ = 0;
  std::vector<Box> boxes_;
  std::vector<LatticeFamily> families_;
  Field field_ = nullptr;
};

OpenSet intersect(const OpenSet& a, const OpenSet& b);
OpenSet unite(const std::vector<OpenSet>& sets, std::size_t dim);

/// Nonnegative field whose positivity set is exactly the open set.
Field indicator(const OpenSet& s);

/// The exact positivity set of f as a box-representable set, when the field's
/// structure determines it.
std::optional<OpenSet> exact_support(Field f);

/// Boxes of a box-representable set restricted to a bounded window.
std::vector<Box> window_boxes(const OpenSet& s, const Box& window);

}  // namespace coverforge
