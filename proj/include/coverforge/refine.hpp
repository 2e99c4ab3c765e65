#pragma once

#include <cstdint>
#include <vector>

#include "coverforge/cover.hpp"

namespace coverforge {

struct MatherResult {
  std::vector<Field> input;  // f_i / Σf
  Field mu;                  // max of the normalized inputs
  std::vector<Field> raw;    // max(0, 2 n_i - mu)
  std::vector<Field> members;  // raw_i / Σ raw, a partition of unity
};

/// Locally finite partition of unity subordinate to the input's supports.
MatherResult mather(const std::vector<Field>& f);
/// The same, as a cover with the new partition.
Cover mather(const Cover& c);

/// A finite index set J and h_J = mu/2 - 1 + Σ_{i in J} n_i with h_J(x) > 0;
/// members outside J vanish wherever h_J > 0.
struct FinitenessWitness {
  std::vector<std::size_t> active;
  Field h;
};
FinitenessWitness local_finiteness_witness(const MatherResult& m, const Point& x);

struct Disjointified {
  Cover cover;  // elements {g_j > 0}, partition g_j, labels "{0,2}"
  std::vector<std::uint64_t> masks;
  std::vector<std::size_t> cardinality;
  std::vector<Field> base;
};

/// Refinement by all nonempty index subsets; members of equal cardinality are
/// disjoint. Uses the cover's partition as is.
Disjointified disjointify(const Cover& c);

/// Strictly ordered sequences starting at index -2.
struct ZigzagParams {
  std::vector<Rational> alpha, beta, gamma;

  const Rational& a(long i) const { return alpha.at(static_cast<std::size_t>(i + 2)); }
  const Rational& b(long i) const { return beta.at(static_cast<std::size_t>(i + 2)); }
  const Rational& c(long i) const { return gamma.at(static_cast<std::size_t>(i + 2)); }
  /// Largest index with all three values present.
  long last() const;
  /// 1 > a_i > b_i > c_i > a_{i+1} > b_{i+1} > 0 over the stored range.
  bool valid() const;
};

/// a_i = 3·8^-(i+3), b_i = 2·8^-(i+3), c_i = 8^-(i+3) for i = -2..last.
ZigzagParams default_zigzag_params(long last);

struct ZigzagResult {
  Cover cover;                // elements {h_i > 0}, partition h_i
  std::vector<Field> levels;  // normalized prefix sums g_0 .. g_{N-1}
};

/// Zigzag refinement of a chain U_0 ⊂ U_1 ⊂ ... with compatible partition.
/// The chain inclusions are checked on the plan window first.
ZigzagResult zigzag_refine(const Cover& chain, const ZigzagParams& params, const SamplePlan& plan);

/// A_i = {f_0 + ... + f_i > 0}, partition unchanged.
Cover chain_from_countable(const Cover& c);

std::string subset_label(std::uint64_t mask, std::size_t n);

}  // namespace coverforge
