#include "coverforge/patterns.hpp"

namespace coverforge::pattern {

std::vector<Field> normalized(const std::vector<Field>& fs) {
  const Field total = fld::add(fs);
  std::vector<Field> out;
  out.reserve(fs.size());
  for (Field f : fs) out.push_back(fld::div(f, total));
  return out;
}

Field mather_raw(const std::vector<Field>& ns, std::size_t i) {
  const Field mu = fld::max(ns);
  return fld::pos_part(fld::sub(fld::scale(Rational(2), ns.at(i)), mu));
}

Field disjoint_piece(const std::vector<Field>& base, std::uint64_t mask) {
  const std::size_t n = base.size();
  const std::uint64_t full = n >= 64 ? ~0ULL : ((1ULL << n) - 1);
  if (mask == 0 || (mask & ~full) != 0) throw Error(ErrorKind::InvalidArgument, "bad subset mask");
  if (mask == full) return fld::min(base);
  std::vector<Field> diffs;
  for (std::size_t k = 0; k < n; ++k) {
    if (!(mask >> k & 1)) continue;
    for (std::size_t l = 0; l < n; ++l)
      if (!(mask >> l & 1)) diffs.push_back(fld::sub(base[k], base[l]));
  }
  return fld::pos_part(fld::min(std::move(diffs)));
}

Field zigzag_term(long i, Field lower, const Rational& beta, Field upper, const Rational& alpha) {
  const std::size_t dim = upper->dim;
  const Field lo = fld::pos_part(fld::sub(fld::constant(dim, beta), lower));
  const Field hi = fld::pos_part(fld::sub(upper, fld::constant(dim, alpha)));
  return fld::mul({fld::constant(dim, pow2(-i)), lo, hi});
}

}  // namespace coverforge::pattern
