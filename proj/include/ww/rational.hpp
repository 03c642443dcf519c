#pragma once

// Exact scalar type used throughout: GMP-backed rationals via
// Boost.Multiprecision. mpq values are kept in canonical form by GMP, so
// equality is structural and 0 is always 0/1.

#include <boost/multiprecision/gmp.hpp>

#include <cctype>
#include <string>
#include <string_view>

#include "ww/error.hpp"

namespace ww {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

inline Integer numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

inline bool is_integer(const Rational& q) { return denominator(q) == 1; }

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// q^e for any integer exponent; q must be nonzero when e < 0.
inline Rational pow(const Rational& q, int e) {
  if (e < 0) {
    if (q == 0) throw DomainError("zero raised to a negative power");
    return Rational(1) / pow(q, -e);
  }
  Rational base = q;
  Rational out = 1;
  while (e > 0) {
    if (e & 1) out *= base;
    base *= base;
    e >>= 1;
  }
  return out;
}

inline Integer factorial(int n) {
  Integer f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

/// (2n-1)!! = 1 * 3 * ... * (2n-1), with (-1)!! = 1.
inline Integer double_factorial_odd(int n) {
  Integer f = 1;
  for (int i = 1; i <= n; ++i) f *= 2 * i - 1;
  return f;
}

/// "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rational& q) {
  if (is_integer(q)) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

/// Parses "p", "p/q", or a finite decimal such as "-2.375" into an exact value.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&]() -> Rational {
    throw InvalidArgument("cannot parse rational number from '" + std::string(text) + "'");
  };
  auto is_int_literal = [](std::string_view s) {
    size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };
  // GMP reads a leading zero as an octal prefix, so strip them.
  auto to_integer = [](std::string_view s) {
    bool negative = !s.empty() && s[0] == '-';
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) s.remove_prefix(1);
    while (s.size() > 1 && s[0] == '0') s.remove_prefix(1);
    Integer v(s.empty() ? std::string("0") : std::string(s));
    return negative ? Integer(-v) : v;
  };

  if (text.empty()) return fail();
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!is_int_literal(num) || !is_int_literal(den)) return fail();
    Integer d = to_integer(den);
    if (d == 0) throw InvalidArgument("zero denominator in '" + std::string(text) + "'");
    return Rational(to_integer(num), d);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole[0] == '-';
    if (!whole.empty() && (whole[0] == '-' || whole[0] == '+')) whole.remove_prefix(1);
    if (whole.empty() && frac.empty()) return fail();
    for (char c : whole)
      if (!std::isdigit(static_cast<unsigned char>(c))) return fail();
    for (char c : frac)
      if (!std::isdigit(static_cast<unsigned char>(c))) return fail();
    std::string digits = std::string(whole) + std::string(frac);
    Integer scale = 1;
    for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Rational q(to_integer(digits), scale);
    return negative ? Rational(-q) : q;
  }
  if (!is_int_literal(text)) return fail();
  return Rational(to_integer(text));
}

}  // namespace ww
