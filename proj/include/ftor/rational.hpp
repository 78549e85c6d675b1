#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ftor {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Errors that map to CLI exit code 2 (malformed input).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Errors that map to CLI exit code 3 (well-formed input outside an
// operation's domain: zero element, non-invertible leading term, ...).
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Rational make_rational(long long num, long long den = 1) {
  if (den == 0) throw DomainError("rational with zero denominator");
  return Rational(Int(num), Int(den));
}

// Accepts "p", "-p", "p/q". Rationals are never serialized as floats.
inline Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(Int(s));
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den == 0) throw InputError("zero denominator in '" + s + "'");
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw InputError("cannot parse rational '" + s + "'");
  }
}

inline std::string rational_str(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) s += "/" + denominator(r).str();
  return s;
}

inline int sign_of(const Rational& r) { return r.sign(); }

inline Rational rational_abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

}  // namespace ftor
