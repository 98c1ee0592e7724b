#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace treelab {

using Integer  = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational rat(long num, long den = 1) { return Rational(num, den); }

// Accepts "3", "-3", "3/4", "-3/4". Throws std::invalid_argument on anything else.
inline Rational parse_rational(std::string_view s) {
  auto parse_int = [](std::string_view t) -> Integer {
    if (t.empty()) throw std::invalid_argument("empty number");
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) throw std::invalid_argument("bad number: " + std::string(t));
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9')
        throw std::invalid_argument("bad number: " + std::string(t));
    return Integer(std::string(t));
  };
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(s));
  Integer num = parse_int(s.substr(0, slash));
  Integer den = parse_int(s.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator: " + std::string(s));
  return Rational(num, den);
}

// Canonical text: "n" when integral, otherwise "n/d" with d > 0.
inline std::string rational_str(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

// Always "n/d", as used by the tree file format.
inline std::string fraction_str(const Rational& q) {
  return numerator(q).str() + "/" + denominator(q).str();
}

}  // namespace treelab
