#ifndef QRSTATS_RATIONAL_HPP
#define QRSTATS_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qrs {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rational& r) { return boost::multiprecision::denominator(r); }

/// Largest integer <= r.
inline Int rat_floor(const Rational& r) {
  Int n = rat_num(r), d = rat_den(r);
  Int q = n / d;
  if (n < 0 && q * d != n) --q;
  return q;
}

/// Smallest integer >= r.
inline Int rat_ceil(const Rational& r) {
  Int n = rat_num(r), d = rat_den(r);
  Int q = n / d;
  if (n > 0 && q * d != n) ++q;
  return q;
}

inline double rat_double(const Rational& r) { return r.template convert_to<double>(); }

inline Int int_pow(Int base, unsigned exp) {
  Int out = 1;
  while (exp) {
    if (exp & 1u) out *= base;
    base *= base;
    exp >>= 1u;
  }
  return out;
}

inline Rational rat_pow(const Rational& base, unsigned exp) {
  return Rational(int_pow(rat_num(base), exp), int_pow(rat_den(base), exp));
}

/// "7/2" -> 7/2, "-3" -> -3, "1.5" is not accepted (exact literals only).
inline Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(Int(text));
    Int num(text.substr(0, slash));
    Int den(text.substr(slash + 1));
    if (den <= 0) throw std::invalid_argument("denominator must be positive");
    return Rational(num, den);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad rational literal: '" + text + "'");
  }
}

/// "num/den", or just "num" when the denominator is 1.
inline std::string rat_string(const Rational& r) {
  Int n = rat_num(r), d = rat_den(r);
  if (d == 1) return n.str();
  return n.str() + "/" + d.str();
}

}  // namespace qrs

#endif
