#pragma once

#include <gmpxx.h>

#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace multifrac {

using BigInt = mpz_class;
using Rational = mpq_class;

// 40 decimal digits (~133 bits) for logarithms and powers of exact masses.
using HighFloat = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<40>>;

/// Parses "p/q", "p", or a decimal/scientific literal ("1e-30", "0.25") exactly.
/// Throws ParseError on malformed input.
Rational parse_rational(std::string_view text);

/// Exact 2^e for e >= 0, or 1/2^-e for negative e.
Rational pow2(long e);

Rational pow(const Rational& base, unsigned long e);

BigInt floor(const Rational& x);

HighFloat to_high(const Rational& x);

/// Outward-rounded decimal rendering: the lower end rounds down, the upper end rounds up.
std::string decimal_down(const Rational& x, int digits);
std::string decimal_up(const Rational& x, int digits);

/// Number of decimal digits needed so that the printed enclosure width is about `width`.
int digits_for_width(const Rational& width);

}  // namespace multifrac
