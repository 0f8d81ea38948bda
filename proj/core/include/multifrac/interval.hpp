#pragma once

#include "multifrac/numeric.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace multifrac {

/// Closed interval with exact rational endpoints. Arithmetic is exact, so every
/// result contains the true value whenever the operands do.
struct Interval {
  Rational lo;
  Rational hi;

  Interval() = default;
  Interval(Rational l, Rational h);
  static Interval point(const Rational& x) { return {x, x}; }

  Rational width() const { return hi - lo; }
  Rational midpoint() const { return (lo + hi) / 2; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool contains_zero() const { return sgn(lo) <= 0 && sgn(hi) >= 0; }
  bool is_point() const { return lo == hi; }
  /// -1 if entirely negative, +1 if entirely positive, 0 if it touches zero.
  int sign() const;

  std::string to_string(int digits) const;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Rational& c);
Interval operator+(const Interval& a, const Rational& c);
/// Throws DomainError when `b` contains zero.
Interval operator/(const Interval& a, const Interval& b);
Interval pow(const Interval& a, unsigned long e);

/// Closed interval of binary64 values with outward rounding on every operation:
/// each result is widened by one ulp on both sides, which covers round-to-nearest.
struct DInterval {
  double lo = 0.0;
  double hi = 0.0;

  static DInterval point(double x) { return {x, x}; }
  /// Sound enclosure of an exact rational.
  static DInterval from(const Rational& x);
  static DInterval from(const Interval& x);

  double mid() const { return 0.5 * (lo + hi); }
  bool disjoint(const DInterval& o) const { return hi < o.lo || o.hi < lo; }
};

inline double down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
inline double up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }

inline DInterval operator+(const DInterval& a, const DInterval& b) {
  return {down(a.lo + b.lo), up(a.hi + b.hi)};
}
inline DInterval operator-(const DInterval& a, const DInterval& b) {
  return {down(a.lo - b.hi), up(a.hi - b.lo)};
}
DInterval operator*(const DInterval& a, const DInterval& b);

}  // namespace multifrac
