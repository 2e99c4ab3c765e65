#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "coverforge/geometry.hpp"
#include "coverforge/pl_function.hpp"

namespace coverforge {

enum class Op : std::uint8_t {
  Const,
  Coord,
  Add,
  Sub,
  Mul,
  Div,  // a / b, defined as 0 where b = 0
  Min,
  Max,
  PosPart,
  Clamp01,
  Tent,
  LatticeTent,
  PlCompose,
};

const char* op_name(Op op);

/// Immutable, hash-consed node of a scalar field ℝⁿ → ℚ. Structurally equal
/// nodes share one address, so pointer comparison is structural equality.
struct FieldNode {
  Op op;
  std::size_t dim;
  std::uint64_t serial;
  bool nonneg;
  std::vector<const FieldNode*> args;
  Rational value;
  int coord = -1;
  Box box;
  LatticeFamily family;
  PLFunction pl;
};

using Field = const FieldNode*;

namespace fld {

Field constant(std::size_t dim, const Rational& c);
Field zero(std::size_t dim);
Field one(std::size_t dim);
Field coord(std::size_t dim, std::size_t axis);
Field add(std::vector<Field> terms);
Field sub(Field a, Field b);
Field mul(std::vector<Field> factors);
Field scale(const Rational& c, Field f);
Field div(Field a, Field b);
Field min(std::vector<Field> terms);
Field max(std::vector<Field> terms);
Field pos_part(Field a);
Field clamp01(Field a);
/// Per-axis product of max(0, min(x - lo, hi - x, 1)); unbounded sides drop out.
Field tent(const Box& b);
/// Sum of the tents of every instance of the family.
Field lattice_tent(const LatticeFamily& f);
Field compose(const PLFunction& pl, Field a);

}  // namespace fld

/// Nested Add nodes flattened to their non-Add leaves, left to right.
std::vector<Field> add_terms(Field f);
/// Number of distinct nodes reachable from f.
std::size_t node_count(Field f);

Rational eval(Field f, const Point& x);

/// Compiled evaluator reusing one slot vector; not thread-safe.
class Evaluator {
 public:
  explicit Evaluator(std::vector<Field> roots);
  /// Evaluates all roots at x; results are indexed like the constructor roots.
  const std::vector<Rational>& operator()(const Point& x);

 private:
  struct Instr {
    Field node;
    std::vector<std::uint32_t> args;
  };
  std::vector<Instr> code_;
  std::vector<std::uint32_t> root_slots_;
  std::vector<Rational> slots_;
  std::vector<Rational> out_;
};

struct Bounds {
  Extended lo;
  Extended hi;
  /// |f(x) - f(y)| <= sum_j lip[j] |x_j - y_j| on the box.
  std::vector<Extended> lip;
};

/// Interval range and per-axis Lipschitz bounds over a bounded box.
Bounds bounds(Field f, const Box& window);

/// Upper bound for the Euclidean Lipschitz constant implied by per-axis bounds.
Extended euclidean_lipschitz(const std::vector<Extended>& lip);

}  // namespace coverforge
