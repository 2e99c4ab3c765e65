#pragma once

#include <cstdint>
#include <vector>

#include "coverforge/field.hpp"

// Canonical node shapes produced by the refinement engines. The entailment
// engine rebuilds these shapes to recognize them, so both sides must agree.
namespace coverforge::pattern {

/// f_i / (f_0 + ... + f_{n-1}).
std::vector<Field> normalized(const std::vector<Field>& fs);

/// max(0, 2 n_i - max_k n_k).
Field mather_raw(const std::vector<Field>& ns, std::size_t i);

/// Piece of the disjoint refinement for the index subset `mask` of `base`:
/// max(0, min_{k in mask, l not in mask} (f_k - f_l)), or min_k f_k for the full set.
Field disjoint_piece(const std::vector<Field>& base, std::uint64_t mask);

/// 2^-i · max(0, beta - lower) · max(0, upper - alpha).
Field zigzag_term(long i, Field lower, const Rational& beta, Field upper, const Rational& alpha);

}  // namespace coverforge::pattern
