#pragma once

#include "multifrac/interval.hpp"
#include "multifrac/numeric.hpp"

#include <span>
#include <string>
#include <vector>

namespace multifrac {

/// Univariate polynomial with arbitrary-precision integer coefficients, lowest degree first.
/// Trailing zeros are stripped, so the leading coefficient is nonzero unless the polynomial is zero.
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<BigInt> ascending);
  IntPoly(std::initializer_list<long> ascending);

  /// Clears denominators: the result is the primitive integer polynomial with positive
  /// proportionality constant to the input.
  static IntPoly from_rational(std::span<const Rational> ascending);
  static IntPoly monomial(unsigned degree, const BigInt& c = 1);

  bool is_zero() const { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<BigInt>& coeffs() const { return coeffs_; }
  BigInt coeff(int i) const;
  const BigInt& leading() const { return coeffs_.back(); }
  bool is_monic() const { return !is_zero() && leading() == 1; }

  Rational eval(const Rational& x) const;
  int sign_at(const Rational& x) const { return sgn(eval(x)); }
  Interval eval(const Interval& x) const;

  IntPoly derivative() const;
  IntPoly reversed() const;
  BigInt content() const;
  IntPoly primitive_part() const;
  IntPoly operator-() const;

  std::string to_string(char var = 'x') const;

  friend bool operator==(const IntPoly&, const IntPoly&) = default;

 private:
  void trim();
  std::vector<BigInt> coeffs_;
};

IntPoly operator+(const IntPoly& a, const IntPoly& b);
IntPoly operator-(const IntPoly& a, const IntPoly& b);
IntPoly operator*(const IntPoly& a, const IntPoly& b);

/// x^n - x^(n-1) - ... - x + 1 for n >= 4; throws DomainError otherwise.
IntPoly salem_polynomial(int n);

/// Primitive gcd with positive leading coefficient; gcd(0, 0) = 0.
IntPoly gcd(const IntPoly& a, const IntPoly& b);

/// p / gcd(p, p'), primitive.
IntPoly square_free_part(const IntPoly& p);

/// Exact division over Q followed by clearing denominators; the remainder must be zero.
IntPoly exact_quotient(const IntPoly& a, const IntPoly& b);

/// Remainder of a modulo b over Q, as rational coefficients.
std::vector<Rational> remainder(std::span<const Rational> a, std::span<const Rational> b);

/// Sturm chain p, p', -rem(...), ... with each member rescaled by a positive constant.
class SturmSequence {
 public:
  explicit SturmSequence(const IntPoly& p);

  int variations(const Rational& x) const;
  /// Number of distinct real roots in the half-open interval (a, b].
  int count(const Rational& a, const Rational& b) const;
  const std::vector<IntPoly>& chain() const { return chain_; }

 private:
  std::vector<IntPoly> chain_;
};

/// 1 + max |a_i / a_n|: every real root lies strictly inside (-B, B).
Rational cauchy_bound(const IntPoly& p);

}  // namespace multifrac
