#include "multifrac/ring.hpp"

#include "multifrac/errors.hpp"

#include <cmath>

namespace multifrac {

std::size_t CoordsHash::operator()(const Coords& c) const noexcept {
  std::size_t h = 1469598103934665603ULL;
  auto mix = [&h](const mpz_t z) {
    const std::size_t n = mpz_size(z);
    h ^= static_cast<std::size_t>(mpz_sgn(z)) + 0x9e3779b97f4a7c15ULL;
    h *= 1099511628211ULL;
    for (std::size_t i = 0; i < n; ++i) {
      h ^= static_cast<std::size_t>(mpz_getlimbn(z, static_cast<mp_size_t>(i)));
      h *= 1099511628211ULL;
    }
  };
  for (const auto& x : c) {
    mix(x.get_num_mpz_t());
    mix(x.get_den_mpz_t());
  }
  return h;
}

std::strong_ordering lex_compare(const Coords& a, const Coords& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = cmp(a[i], b[i]);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
  }
  return a.size() <=> b.size();
}

RingContext::RingContext(IntPoly modulus, AlgebraicNumber lambda)
    : dimension_(modulus.degree()), modulus_(std::move(modulus)), lambda_(std::move(lambda)) {
  if (!lambda_.is_rational()) lambda_ = lambda_.refine(pow2(-128));
  lambda_d_ = DInterval::from(lambda_.enclosure());
  if (is_rational()) {
    power_d_ = Coords{lambda_.enclosure().lo};
  } else {
    power_d_.resize(static_cast<std::size_t>(dimension_));
    for (int i = 0; i < dimension_; ++i) power_d_[static_cast<std::size_t>(i)] = Rational(-modulus_.coeff(i));
  }
}

std::shared_ptr<const RingContext> RingContext::algebraic(const IntPoly& modulus, const AlgebraicNumber& lambda) {
  if (!modulus.is_monic()) throw DomainError("ring modulus must be monic: " + modulus.to_string());
  if (lambda.sign_of(modulus) != 0) throw DomainError("lambda is not a root of the modulus");
  return std::shared_ptr<const RingContext>(new RingContext(modulus, lambda));
}

std::shared_ptr<const RingContext> RingContext::rational(const Rational& lambda) {
  IntPoly lin(std::vector<BigInt>{-lambda.get_num(), lambda.get_den()});
  if (lin.is_monic()) {
    // Integer lambda: x - lambda is already monic, use the algebraic path.
    return algebraic(lin, AlgebraicNumber::from_rational(lambda));
  }
  return std::shared_ptr<const RingContext>(new RingContext(lin, AlgebraicNumber::from_rational(lambda)));
}

Coords RingContext::constant(const Rational& c) const {
  Coords out = zero();
  out[0] = c;
  return out;
}

Coords RingContext::lambda_power(unsigned k) const {
  Coords out = constant(1);
  for (unsigned i = 0; i < k; ++i) out = multiply_by_lambda(out);
  return out;
}

Coords RingContext::add(const Coords& a, const Coords& b) const {
  Coords out(a);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

Coords RingContext::sub(const Coords& a, const Coords& b) const {
  Coords out(a);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

Coords RingContext::multiply_by_lambda(const Coords& a) const {
  const std::size_t d = a.size();
  Coords out(d);
  const Rational& top = a[d - 1];
  out[0] = top * power_d_[0];
  for (std::size_t i = 1; i < d; ++i) {
    out[i] = a[i - 1];
    if (top != 0) out[i] += top * power_d_[i];
  }
  return out;
}

Coords RingContext::reduce(std::span<const Rational> raw) const {
  // Horner in the ring: ((r_n lambda + r_{n-1}) lambda + ...) + r_0.
  Coords acc = zero();
  for (auto it = raw.rbegin(); it != raw.rend(); ++it) {
    acc = multiply_by_lambda(acc);
    acc[0] += *it;
  }
  return acc;
}

Coords RingContext::multiply(const Coords& a, const Coords& b) const {
  Coords acc = zero();
  for (auto i = a.size(); i-- > 0;) {
    acc = multiply_by_lambda(acc);
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) acc[j] += a[i] * b[j];
  }
  return acc;
}

DInterval RingContext::enclosure_d(const Coords& c) const {
  DInterval acc = DInterval::from(c.back());
  for (auto i = c.size() - 1; i-- > 0;) acc = acc * lambda_d_ + DInterval::from(c[i]);
  return acc;
}

Interval RingContext::enclosure(const Coords& c, const Rational& width) const {
  if (is_rational()) return Interval::point(c[0]);
  // Refine lambda until the Horner enclosure is narrow enough.
  AlgebraicNumber a = lambda_;
  while (true) {
    Interval acc = Interval::point(c.back());
    for (auto i = c.size() - 1; i-- > 0;) acc = acc * a.enclosure() + c[i];
    if (acc.width() <= width) return acc;
    a = a.refine(a.enclosure().width() / 1024);
    if (a.is_rational()) {
      Interval p = Interval::point(c.back());
      for (auto i = c.size() - 1; i-- > 0;) p = p * a.enclosure() + c[i];
      return p;
    }
  }
}

int RingContext::sign(const Coords& c) const {
  if (is_rational()) return sgn(c[0]);
  bool all_zero = true;
  for (const auto& x : c) all_zero = all_zero && x == 0;
  if (all_zero) return 0;
  DInterval e = enclosure_d(c);
  if (e.lo > 0) return 1;
  if (e.hi < 0) return -1;
  return lambda_.sign_of(std::span<const Rational>(c));
}

int RingContext::compare_rational(const Coords& c, const Rational& r) const {
  Coords d(c);
  d[0] -= r;
  return sign(d);
}

BigInt RingContext::floor_scaled(const Coords& c, int m) const {
  if (is_rational()) return multifrac::floor(Rational(c[0] * pow2(m)));
  DInterval e = enclosure_d(c);
  double lo = std::floor(std::ldexp(e.lo, m));
  double hi = std::floor(std::ldexp(e.hi, m));
  if (lo == hi && std::fabs(lo) < 9.0e15) return BigInt(static_cast<long>(lo));
  // Exact path: walk the candidate until value*2^m - k >= 0 > value*2^m - (k+1).
  BigInt k(static_cast<long>(std::floor(std::ldexp(e.mid(), m))));
  Rational scale = pow2(m);
  Coords scaled(c);
  for (auto& x : scaled) x *= scale;
  while (compare_rational(scaled, Rational(k)) < 0) --k;
  while (compare_rational(scaled, Rational(k + 1)) >= 0) ++k;
  return k;
}

std::string RingContext::description() const {
  std::string s = "modulus:";
  for (const auto& c : modulus_.coeffs()) s += " " + c.get_str();
  s += "; lambda in [" + lambda_.enclosure().lo.get_str() + ", " + lambda_.enclosure().hi.get_str() + "]";
  return s;
}

bool RingContext::same_as(const RingContext& other) const {
  if (this == &other) return true;
  if (!(modulus_ == other.modulus_)) return false;
  if (is_rational()) return lambda_.enclosure().lo == other.lambda_.enclosure().lo;
  // Same modulus; lambda equal iff the isolating intervals overlap (each holds one root).
  const Interval& a = lambda_.enclosure();
  const Interval& b = other.lambda_.enclosure();
  return !(a.hi < b.lo || b.hi < a.lo) && SturmSequence(square_free_part(modulus_))
                                                  .count(std::max(a.lo, b.lo), std::min(a.hi, b.hi)) == 1;
}

RingElement RingElement::from_coords(ContextPtr ctx, Coords coords) {
  if (static_cast<int>(coords.size()) != ctx->dimension()) {
    throw DomainError("coordinate vector has length " + std::to_string(coords.size()) + ", expected " +
                      std::to_string(ctx->dimension()));
  }
  return {std::move(ctx), std::move(coords)};
}

RingElement RingElement::constant(ContextPtr ctx, const Rational& c) {
  Coords coords = ctx->constant(c);
  return {std::move(ctx), std::move(coords)};
}

std::string RingElement::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < coords.size(); ++i) s += (i ? " " : "") + coords[i].get_str();
  return s + ")";
}

namespace {

void require_same(const RingElement& a, const RingElement& b) {
  if (!a.ctx || !b.ctx || !a.ctx->same_as(*b.ctx)) throw DomainError("ring elements from different contexts");
}

}  // namespace

RingElement operator+(const RingElement& a, const RingElement& b) {
  require_same(a, b);
  return {a.ctx, a.ctx->add(a.coords, b.coords)};
}

RingElement operator-(const RingElement& a, const RingElement& b) {
  require_same(a, b);
  return {a.ctx, a.ctx->sub(a.coords, b.coords)};
}

RingElement operator*(const RingElement& a, const RingElement& b) {
  require_same(a, b);
  return {a.ctx, a.ctx->multiply(a.coords, b.coords)};
}

bool operator==(const RingElement& a, const RingElement& b) { return compare(a, b) == Ordering::equal; }

RingElement reduce_mod_minpoly(const IntPoly& raw, const ContextPtr& ctx) {
  if (!ctx->modulus().is_monic()) {
    throw DomainError("reduce_mod_minpoly needs a monic modulus, got " + ctx->modulus().to_string());
  }
  std::vector<Rational> r;
  for (const auto& c : raw.coeffs()) r.emplace_back(c);
  return {ctx, ctx->reduce(r)};
}

Ordering compare(const RingElement& a, const RingElement& b) {
  require_same(a, b);
  if (a.coords == b.coords) return Ordering::equal;
  int s = a.ctx->sign(a.ctx->sub(a.coords, b.coords));
  if (s < 0) return Ordering::less;
  if (s > 0) return Ordering::greater;
  return Ordering::equal;
}

}  // namespace multifrac
