#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace phm {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "p", "-p" or "p/q". Throws std::invalid_argument on malformed input
/// or a zero denominator.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& r);
std::string to_string(const Integer& z);

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline int sign(const Rational& r) { return sgn(r); }
inline int sign(const Integer& z) { return sgn(z); }

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

/// Symmetric residue of a modulo m, in (-m/2, m/2].
Integer symmetric_mod(const Integer& a, const Integer& m);

}  // namespace phm
