#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace coverforge {

using Rational = mpq_class;
using Point = std::vector<Rational>;

enum class ErrorKind {
  DimensionMismatch,
  EmptyWindow,
  Unsupported,
  InvalidArgument,
  MissingMeet,
  Malformed,
  CoverageGap,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parses "p/q", "p", or a plain decimal such as "-2.75".
Rational parse_rational(std::string_view text);

/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& q);

/// Rational or ±∞. Used for box endpoints and interval bounds.
class Extended {
 public:
  enum class Kind : std::uint8_t { NegInf, Finite, PosInf };

  Extended() : kind_(Kind::Finite) {}
  Extended(const Rational& q) : kind_(Kind::Finite), value_(q) {}  // NOLINT implicit on purpose
  Extended(long v) : kind_(Kind::Finite), value_(v) {}             // NOLINT

  static Extended neg_inf() { return Extended(Kind::NegInf); }
  static Extended pos_inf() { return Extended(Kind::PosInf); }

  Kind kind() const { return kind_; }
  bool finite() const { return kind_ == Kind::Finite; }
  bool is_neg_inf() const { return kind_ == Kind::NegInf; }
  bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  const Rational& value() const;

  friend bool operator==(const Extended& a, const Extended& b);
  friend std::strong_ordering operator<=>(const Extended& a, const Extended& b);

  friend Extended operator+(const Extended& a, const Extended& b);
  friend Extended operator-(const Extended& a);
  friend Extended operator-(const Extended& a, const Extended& b) { return a + (-b); }
  // 0 * inf = 0: interval bounds multiply a zero-width factor to zero.
  friend Extended operator*(const Extended& a, const Extended& b);

 private:
  explicit Extended(Kind k) : kind_(k) {}
  Kind kind_;
  Rational value_;
};

Extended parse_extended(std::string_view text);
std::string to_string(const Extended& e);

inline Extended min(const Extended& a, const Extended& b) { return b < a ? b : a; }
inline Extended max(const Extended& a, const Extended& b) { return a < b ? b : a; }

/// A rational lower bound of sqrt(q) within 2^-bits.
Rational sqrt_lower(const Rational& q, unsigned bits = 40);
/// A rational upper bound of sqrt(q) within 2^-bits.
Rational sqrt_upper(const Rational& q, unsigned bits = 40);

Rational pow2(long exponent);

double to_double(const Rational& q);
/// Nearest dyadic rational with the given number of fractional bits.
Rational from_double(double v, unsigned bits = 52);

Rational squared_norm(const Point& x);

}  // namespace coverforge
