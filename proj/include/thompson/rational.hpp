#pragma once

#include <gmpxx.h>

#include <string>

namespace thompson {

/// Exact rational number. Every numeric quantity in the library is one of
/// these or an integer; there is no floating point anywhere.
using Rational = mpq_class;
using Integer = mpz_class;

/// Parses `p/q` or `p`. Throws std::invalid_argument on malformed input.
Rational parse_rational(const std::string& text);
std::string format_rational(const Rational& q);

/// 2^k as an exact rational, k may be negative.
Rational pow2(long k);
Rational pow(const Rational& base, long exponent);

}  // namespace thompson
