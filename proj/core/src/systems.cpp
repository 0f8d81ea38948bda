#include "multifrac/systems.hpp"

#include "multifrac/algebraic.hpp"

namespace multifrac::systems {

ContextPtr salem_context(int n) { return RingContext::algebraic(salem_polynomial(n), salem_ratio(n)); }

ContextPtr golden_context() {
  IntPoly modulus{-1, 1, 1};
  return RingContext::algebraic(modulus, AlgebraicNumber::isolated(modulus, Interval(Rational(1, 2), Rational(1))));
}

EqualRatioIFS bernoulli(const ContextPtr& ctx) {
  return EqualRatioIFS(ctx, {ctx->constant(-1), ctx->constant(1)}, {Rational(1, 2), Rational(1, 2)});
}

EqualRatioIFS cantor() {
  auto ctx = RingContext::rational(Rational(1, 3));
  return EqualRatioIFS(ctx, {ctx->constant(0), ctx->constant(Rational(2, 3))}, {Rational(1, 2), Rational(1, 2)});
}

EqualRatioIFS binary_lebesgue() {
  auto ctx = RingContext::rational(Rational(1, 2));
  return EqualRatioIFS(ctx, {ctx->constant(0), ctx->constant(Rational(1, 2))}, {Rational(1, 2), Rational(1, 2)});
}

}  // namespace multifrac::systems
