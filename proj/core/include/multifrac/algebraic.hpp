#pragma once

#include "multifrac/interval.hpp"
#include "multifrac/polynomial.hpp"

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace multifrac {

/// A real algebraic number: a square-free primitive integer polynomial together with a
/// rational interval isolating exactly one of its roots. Immutable; refinement returns a
/// new value. An exact rational is represented by a degree-1 polynomial and a point interval.
class AlgebraicNumber {
 public:
  static AlgebraicNumber from_rational(const Rational& x);
  /// `enclosure` must contain exactly one root of `p` (checked by a Sturm count).
  static AlgebraicNumber isolated(const IntPoly& p, const Interval& enclosure);

  const IntPoly& minpoly() const { return minpoly_; }
  const Interval& enclosure() const { return enclosure_; }
  bool is_rational() const { return enclosure_.is_point(); }

  /// Same number, enclosure width <= width (bisection with exact signs).
  AlgebraicNumber refine(const Rational& width) const;

  /// 1/a. Reuses the polynomial when it is palindromic; otherwise needs a monic
  /// polynomial whose reverse is monic (constant coefficient +-1).
  AlgebraicNumber reciprocal() const;

  /// Exact sign of q(a). Refines locally until the interval evaluation excludes zero,
  /// after deciding exact vanishing through gcd(q, minpoly).
  int sign_of(const IntPoly& q) const;
  int sign_of(std::span<const Rational> q) const;
  /// Sign of a - r.
  int compare(const Rational& r) const;

  std::string to_string(int digits) const { return enclosure_.to_string(digits); }

 private:
  AlgebraicNumber(IntPoly p, Interval enclosure) : minpoly_(std::move(p)), enclosure_(std::move(enclosure)) {}
  AlgebraicNumber bisect() const;
  bool vanishes(const IntPoly& q) const;

  IntPoly minpoly_;
  Interval enclosure_;
};

/// Disjoint rational intervals, each isolating one distinct real root, in increasing order.
/// Rational roots found on bisection points come back as point intervals.
std::vector<Interval> isolate_real_roots(const IntPoly& p);

std::vector<AlgebraicNumber> real_roots(const IntPoly& p);

/// Root with the greatest isolating interval; throws DomainError if there are no real roots.
AlgebraicNumber largest_real_root(const IntPoly& p);

/// Largest real root beta_n of salem_polynomial(n).
AlgebraicNumber salem_root(int n);

/// 1/beta_n, the root of salem_polynomial(n) in (0, 1).
AlgebraicNumber salem_ratio(int n);

struct SalemGrowth {
  int n;
  bool holds;  // beta_n^(n+1) > 2^n
};

/// Certified truth of beta_n^(n+1) > 2^n for n in [n_lo, n_hi].
std::vector<SalemGrowth> verify_salem_growth(int n_lo, int n_hi);

/// (x - 1) Q_n(x) == x^(n+1) - 2x^n + 2x - 1 by exact multiplication.
bool verify_salem_identity(int n);

}  // namespace multifrac
