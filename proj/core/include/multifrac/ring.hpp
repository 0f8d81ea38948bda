#pragma once

#include "multifrac/algebraic.hpp"
#include "multifrac/interval.hpp"
#include "multifrac/numeric.hpp"
#include "multifrac/polynomial.hpp"

#include <compare>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace multifrac {

/// Coordinates of an element of Z[lambda] (or Q, for a rational lambda) in the
/// basis 1, lambda, ..., lambda^(d-1).
using Coords = std::vector<Rational>;

struct CoordsHash {
  std::size_t operator()(const Coords& c) const noexcept;
};

/// Lexicographic integer order on coordinate vectors (not the real order).
std::strong_ordering lex_compare(const Coords& a, const Coords& b);

/// The shared arithmetic context of a ring Z[lambda]: either a monic integer modulus of
/// degree d with an isolated root lambda, or a rational lambda (d = 1, coordinates are values).
class RingContext {
 public:
  static std::shared_ptr<const RingContext> algebraic(const IntPoly& modulus, const AlgebraicNumber& lambda);
  static std::shared_ptr<const RingContext> rational(const Rational& lambda);

  int dimension() const { return dimension_; }
  bool is_rational() const { return lambda_.is_rational() && modulus_.degree() == 1 && !modulus_.is_monic(); }
  /// Monic modulus for algebraic contexts; den*x - num for rational ones.
  const IntPoly& modulus() const { return modulus_; }
  const AlgebraicNumber& lambda() const { return lambda_; }
  const DInterval& lambda_d() const { return lambda_d_; }

  Coords zero() const { return Coords(static_cast<std::size_t>(dimension_), Rational(0)); }
  Coords constant(const Rational& c) const;
  /// Coordinates of lambda^k.
  Coords lambda_power(unsigned k) const;

  Coords add(const Coords& a, const Coords& b) const;
  Coords sub(const Coords& a, const Coords& b) const;
  Coords multiply_by_lambda(const Coords& a) const;
  Coords multiply(const Coords& a, const Coords& b) const;
  /// Reduces an arbitrary-degree polynomial in lambda with rational coefficients.
  Coords reduce(std::span<const Rational> raw) const;

  DInterval enclosure_d(const Coords& c) const;
  Interval enclosure(const Coords& c, const Rational& width) const;
  /// Exact sign of the real value.
  int sign(const Coords& c) const;
  /// Exact sign of value(c) - r.
  int compare_rational(const Coords& c, const Rational& r) const;
  /// Certified floor(value(c) * 2^m).
  BigInt floor_scaled(const Coords& c, int m) const;

  /// Stable text identifying the modulus and lambda's isolating interval.
  std::string description() const;

  bool same_as(const RingContext& other) const;

 private:
  RingContext(IntPoly modulus, AlgebraicNumber lambda);

  int dimension_;
  IntPoly modulus_;
  AlgebraicNumber lambda_;
  DInterval lambda_d_;
  Coords power_d_;  // lambda^d in coordinates
};

using ContextPtr = std::shared_ptr<const RingContext>;

/// An element of Z[lambda] in canonical coordinates.
struct RingElement {
  ContextPtr ctx;
  Coords coords;

  static RingElement from_coords(ContextPtr ctx, Coords coords);
  static RingElement constant(ContextPtr ctx, const Rational& c);

  DInterval enclosure_d() const { return ctx->enclosure_d(coords); }
  Interval enclosure(const Rational& width) const { return ctx->enclosure(coords, width); }
  int sign() const { return ctx->sign(coords); }
  std::string to_string() const;
};

RingElement operator+(const RingElement& a, const RingElement& b);
RingElement operator-(const RingElement& a, const RingElement& b);
RingElement operator*(const RingElement& a, const RingElement& b);
bool operator==(const RingElement& a, const RingElement& b);

/// Canonical coordinates of raw(lambda) for an integer polynomial `raw`. Requires a monic
/// modulus (throws DomainError otherwise).
RingElement reduce_mod_minpoly(const IntPoly& raw, const ContextPtr& ctx);

enum class Ordering { less, equal, greater };

/// Real order. `equal` when coordinates coincide, or when the difference vanishes at lambda
/// exactly; otherwise decided by refining lambda. Mixed contexts throw DomainError.
Ordering compare(const RingElement& a, const RingElement& b);

}  // namespace multifrac
