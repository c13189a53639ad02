#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "flatext/errors.hpp"

namespace flatext {

// Exact arithmetic everywhere in the flatness pipeline. cpp_rational keeps
// values in lowest terms with positive denominator.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Accepts "p/q" or a plain integer string. No floats, no whitespace.
inline Rational parse_rational(const std::string& text) {
  auto fail = [&]() -> Rational {
    throw ParseError("invalid rational literal: \"" + text + "\"");
  };
  if (text.empty()) return fail();
  const auto slash = text.find('/');
  const std::string num_part = text.substr(0, slash);
  auto is_integer = [](const std::string& s, bool allow_sign) {
    if (s.empty()) return false;
    std::size_t i = (allow_sign && s[0] == '-') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  if (!is_integer(num_part, true)) return fail();
  if (slash == std::string::npos) return Rational(BigInt(num_part));
  const std::string den_part = text.substr(slash + 1);
  if (!is_integer(den_part, false)) return fail();
  BigInt den(den_part);
  if (den == 0) return fail();
  return Rational(BigInt(num_part), den);
}

inline std::string rational_to_string(const Rational& r) {
  const BigInt num = numerator(r);
  const BigInt den = denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline double rational_to_double(const Rational& r) {
  return r.convert_to<double>();
}

}  // namespace flatext
