#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace contractkit {

// Exact arbitrary-precision fraction; all contract quantities live here.
using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

// High-precision float, used only where square roots force us off the
// rationals (team pricing, the sqrt(c) lemma checks).
using BigFloat = boost::multiprecision::mpf_float_100;

using Bitmask = std::uint32_t;

inline BigFloat to_bigfloat(const Rational& r) {
  return BigFloat(numerator(r)) / BigFloat(denominator(r));
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Parses "p/q", "p", or a decimal string like "0.55" into an exact fraction.
inline Rational parse_rational(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty rational string");
  std::string str(s);
  auto slash = str.find('/');
  if (slash != std::string::npos) {
    Integer num(str.substr(0, slash));
    Integer den(str.substr(slash + 1));
    if (den <= 0) throw std::invalid_argument("denominator must be positive: " + str);
    return Rational(num, den);
  }
  auto dot = str.find('.');
  if (dot == std::string::npos) return Rational(Integer(str));
  bool neg = false;
  std::string digits = str;
  if (!digits.empty() && (digits[0] == '+' || digits[0] == '-')) {
    neg = digits[0] == '-';
    digits = digits.substr(1);
    dot = digits.find('.');
  }
  std::string intpart = digits.substr(0, dot);
  std::string frac = digits.substr(dot + 1);
  if (intpart.empty()) intpart = "0";
  if (frac.empty()) frac = "0";
  Integer num(intpart);
  Integer den = 1;
  for (char c : frac) {
    if (c < '0' || c > '9') throw std::invalid_argument("bad decimal string: " + str);
    num = num * 10 + (c - '0');
    den *= 10;
  }
  Rational r(num, den);
  return neg ? -r : r;
}

inline std::string to_string(const Rational& r) { return r.str(); }

// Display-only decimal rendering, 20 significant digits.
inline std::string to_decimal_string(const Rational& r) {
  return to_bigfloat(r).str(20);
}

}  // namespace contractkit
