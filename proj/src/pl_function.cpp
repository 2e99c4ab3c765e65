#include "coverforge/pl_function.hpp"

#include <algorithm>

namespace coverforge {

PLFunction::PLFunction(std::vector<Rational> xs, std::vector<Rational> ys, Tail tail)
    : xs_(std::move(xs)), ys_(std::move(ys)), tail_(tail) {
  if (xs_.empty() || xs_.size() != ys_.size())
    throw Error(ErrorKind::InvalidArgument, "PL function needs matching nonempty breakpoints and values");
  for (std::size_t k = 1; k < xs_.size(); ++k)
    if (!(xs_[k - 1] < xs_[k])) throw Error(ErrorKind::InvalidArgument, "PL breakpoints must increase");
  if (tail_ == Tail::Linear && xs_.size() < 2) tail_ = Tail::Constant;
}

PLFunction PLFunction::constant(const Rational& c) { return PLFunction({Rational(0)}, {c}); }

Rational PLFunction::tail_slope() const {
  if (tail_ == Tail::Constant) return Rational(0);
  const std::size_t n = xs_.size();
  return (ys_[n - 1] - ys_[n - 2]) / (xs_[n - 1] - xs_[n - 2]);
}

Rational PLFunction::operator()(const Rational& x) const {
  if (x <= xs_.front()) return ys_.front();
  if (x >= xs_.back()) return ys_.back() + tail_slope() * (x - xs_.back());
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  const std::size_t k = static_cast<std::size_t>(it - xs_.begin());
  const Rational t = (x - xs_[k - 1]) / (xs_[k] - xs_[k - 1]);
  return ys_[k - 1] + t * (ys_[k] - ys_[k - 1]);
}

bool PLFunction::nondecreasing() const {
  for (std::size_t k = 1; k < ys_.size(); ++k)
    if (ys_[k] < ys_[k - 1]) return false;
  return tail_slope() >= 0;
}

bool PLFunction::nonincreasing() const {
  for (std::size_t k = 1; k < ys_.size(); ++k)
    if (ys_[k] > ys_[k - 1]) return false;
  return tail_slope() <= 0;
}

Rational PLFunction::min_value() const {
  if (tail_slope() < 0) throw Error(ErrorKind::InvalidArgument, "PL function is unbounded below");
  return *std::min_element(ys_.begin(), ys_.end());
}

Rational PLFunction::max_abs_slope() const {
  Rational m = abs(tail_slope());
  for (std::size_t k = 1; k < xs_.size(); ++k) {
    const Rational s = abs((ys_[k] - ys_[k - 1]) / (xs_[k] - xs_[k - 1]));
    if (s > m) m = s;
  }
  return m;
}

}  // namespace coverforge
