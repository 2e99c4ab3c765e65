#include "coverforge/rational.hpp"

#include <cmath>

namespace coverforge {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && s.front() == ' ') s.erase(s.begin());
  while (!s.empty() && s.back() == ' ') s.pop_back();
  if (s.empty()) throw Error(ErrorKind::Malformed, "empty rational literal");
  if (!s.empty() && s.front() == '+') s.erase(s.begin());
  const auto dot = s.find('.');
  if (dot != std::string::npos) {
    if (s.find('/') != std::string::npos)
      throw Error(ErrorKind::Malformed, "mixed decimal/fraction literal: " + std::string(text));
    const bool neg = !s.empty() && s.front() == '-';
    std::string digits = s.substr(neg ? 1 : 0);
    const auto d = digits.find('.');
    std::string whole = digits.substr(0, d);
    std::string frac = digits.substr(d + 1);
    if (whole.empty()) whole = "0";
    for (char c : whole + frac)
      if (c < '0' || c > '9')
        throw Error(ErrorKind::Malformed, "bad decimal literal: " + std::string(text));
    mpz_class num(whole + frac);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    Rational q(num, den);
    q.canonicalize();
    return neg ? Rational(-q) : q;
  }
  Rational q;
  if (q.set_str(s, 10) != 0 || q.get_den() == 0)
    throw Error(ErrorKind::Malformed, "bad rational literal: " + std::string(text));
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

const Rational& Extended::value() const {
  if (kind_ != Kind::Finite) throw Error(ErrorKind::InvalidArgument, "value() of an infinite endpoint");
  return value_;
}

bool operator==(const Extended& a, const Extended& b) {
  if (a.kind_ != b.kind_) return false;
  return a.kind_ != Extended::Kind::Finite || a.value_ == b.value_;
}

std::strong_ordering operator<=>(const Extended& a, const Extended& b) {
  if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
  if (a.kind_ != Extended::Kind::Finite) return std::strong_ordering::equal;
  const int c = cmp(a.value_, b.value_);
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

Extended operator+(const Extended& a, const Extended& b) {
  if (a.finite() && b.finite()) return Extended(Rational(a.value_ + b.value_));
  if ((a.is_neg_inf() && b.is_pos_inf()) || (a.is_pos_inf() && b.is_neg_inf()))
    throw Error(ErrorKind::InvalidArgument, "inf - inf in extended arithmetic");
  return a.finite() ? b : a;
}

Extended operator-(const Extended& a) {
  if (a.is_neg_inf()) return Extended::pos_inf();
  if (a.is_pos_inf()) return Extended::neg_inf();
  return Extended(Rational(-a.value_));
}

Extended operator*(const Extended& a, const Extended& b) {
  if (a.finite() && b.finite()) return Extended(Rational(a.value_ * b.value_));
  const int sa = a.finite() ? sgn(a.value_) : (a.is_pos_inf() ? 1 : -1);
  const int sb = b.finite() ? sgn(b.value_) : (b.is_pos_inf() ? 1 : -1);
  if (sa == 0 || sb == 0) return Extended(Rational(0));
  return sa * sb > 0 ? Extended::pos_inf() : Extended::neg_inf();
}

Extended parse_extended(std::string_view text) {
  if (text == "-inf") return Extended::neg_inf();
  if (text == "+inf" || text == "inf") return Extended::pos_inf();
  return Extended(parse_rational(text));
}

std::string to_string(const Extended& e) {
  if (e.is_neg_inf()) return "-inf";
  if (e.is_pos_inf()) return "+inf";
  return to_string(e.value());
}

Rational sqrt_lower(const Rational& q, unsigned bits) {
  if (sgn(q) <= 0) return Rational(0);
  // sqrt(a/b) = sqrt(a*b)/b
  mpz_class scaled = q.get_num() * q.get_den();
  mpz_class shift = mpz_class(1) << (2 * bits);
  scaled *= shift;
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
  Rational r(root, q.get_den() * (mpz_class(1) << bits));
  r.canonicalize();
  return r;
}

Rational sqrt_upper(const Rational& q, unsigned bits) {
  if (sgn(q) <= 0) return Rational(0);
  mpz_class scaled = q.get_num() * q.get_den();
  scaled *= mpz_class(1) << (2 * bits);
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
  if (root * root != scaled) root += 1;
  Rational r(root, q.get_den() * (mpz_class(1) << bits));
  r.canonicalize();
  return r;
}

Rational pow2(long exponent) {
  Rational r(1);
  if (exponent >= 0) {
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(exponent));
  } else {
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(-exponent));
  }
  return r;
}

double to_double(const Rational& q) { return q.get_d(); }

Rational from_double(double v, unsigned bits) {
  if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "non-finite double");
  const double scaled = std::nearbyint(std::ldexp(v, static_cast<int>(bits)));
  mpz_class num;
  mpz_set_d(num.get_mpz_t(), scaled);
  Rational r(num, mpz_class(1) << bits);
  r.canonicalize();
  return r;
}

Rational squared_norm(const Point& x) {
  Rational s(0);
  for (const auto& c : x) s += c * c;
  return s;
}

}  // namespace coverforge
