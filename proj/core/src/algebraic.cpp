#include "multifrac/algebraic.hpp"

#include "multifrac/errors.hpp"

#include <algorithm>
#include <functional>

namespace multifrac {

namespace {

// Integer polynomial equal to q times a positive constant (sign preserved).
IntPoly clear_denominators(std::span<const Rational> q) {
  BigInt den = 1;
  for (const auto& c : q) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  std::vector<BigInt> out;
  out.reserve(q.size());
  for (const auto& c : q) {
    Rational s = c * den;
    out.push_back(s.get_num());
  }
  return IntPoly(std::move(out));
}

// Degree-1 primitive polynomial den*x - num vanishing at x.
IntPoly linear_for(const Rational& x) {
  return IntPoly(std::vector<BigInt>{-x.get_num(), x.get_den()});
}

}  // namespace

AlgebraicNumber AlgebraicNumber::from_rational(const Rational& x) {
  return AlgebraicNumber(linear_for(x), Interval::point(x));
}

AlgebraicNumber AlgebraicNumber::isolated(const IntPoly& p, const Interval& enclosure) {
  if (p.degree() < 1) throw DomainError("algebraic number needs a non-constant polynomial");
  IntPoly sf = square_free_part(p);
  if (enclosure.is_point()) {
    if (sf.sign_at(enclosure.lo) != 0) throw DomainError("point enclosure is not a root");
    return from_rational(enclosure.lo);
  }
  if (sf.sign_at(enclosure.lo) == 0 || sf.sign_at(enclosure.hi) == 0) {
    throw DomainError("isolating interval endpoints must not be roots");
  }
  SturmSequence s(sf);
  if (s.count(enclosure.lo, enclosure.hi) != 1) {
    throw DomainError("interval does not isolate exactly one root");
  }
  return AlgebraicNumber(std::move(sf), enclosure);
}

AlgebraicNumber AlgebraicNumber::bisect() const {
  if (is_rational()) return *this;
  Rational mid = enclosure_.midpoint();
  int s = minpoly_.sign_at(mid);
  if (s == 0) return from_rational(mid);
  if (s != minpoly_.sign_at(enclosure_.lo)) return AlgebraicNumber(minpoly_, Interval(enclosure_.lo, mid));
  return AlgebraicNumber(minpoly_, Interval(mid, enclosure_.hi));
}

AlgebraicNumber AlgebraicNumber::refine(const Rational& width) const {
  if (sgn(width) <= 0) throw DomainError("refinement width must be positive");
  AlgebraicNumber a = *this;
  while (a.enclosure_.width() > width) a = a.bisect();
  return a;
}

AlgebraicNumber AlgebraicNumber::reciprocal() const {
  if (is_rational()) {
    if (enclosure_.lo == 0) throw DomainError("reciprocal of zero");
    Rational inv = 1 / enclosure_.lo;
    return from_rational(inv);
  }
  AlgebraicNumber a = *this;
  while (a.enclosure_.contains_zero()) a = a.bisect();
  if (a.is_rational()) return a.reciprocal();

  IntPoly rev = minpoly_.reversed();
  if (!(rev == minpoly_ || rev == -minpoly_)) {
    const BigInt c0 = minpoly_.coeff(0);
    if (!minpoly_.is_monic() || !(c0 == 1 || c0 == -1)) {
      throw DomainError("reciprocal requires a palindromic polynomial or a monic one with constant term +-1");
    }
  }
  rev = rev.primitive_part();
  Interval inv(Rational(1 / a.enclosure_.hi), Rational(1 / a.enclosure_.lo));
  return isolated(rev, inv);
}

bool AlgebraicNumber::vanishes(const IntPoly& q) const {
  if (is_rational()) return q.sign_at(enclosure_.lo) == 0;
  IntPoly g = gcd(minpoly_, q);
  if (g.degree() < 1) return false;
  // g divides minpoly, so its only possible root in the isolating interval is this number.
  return SturmSequence(g).count(enclosure_.lo, enclosure_.hi) > 0;
}

int AlgebraicNumber::sign_of(const IntPoly& q) const {
  if (q.is_zero()) return 0;
  if (is_rational()) return q.sign_at(enclosure_.lo);

  AlgebraicNumber a = *this;
  for (int step = 0; step < 64; ++step) {
    int s = q.eval(a.enclosure_).sign();
    if (s != 0) return s;
    a = a.bisect();
    if (a.is_rational()) return q.sign_at(a.enclosure_.lo);
  }
  if (vanishes(q)) return 0;
  while (true) {
    int s = q.eval(a.enclosure_).sign();
    if (s != 0) return s;
    a = a.bisect();
    if (a.is_rational()) return q.sign_at(a.enclosure_.lo);
  }
}

int AlgebraicNumber::sign_of(std::span<const Rational> q) const { return sign_of(clear_denominators(q)); }

int AlgebraicNumber::compare(const Rational& r) const {
  std::vector<Rational> q{Rational(-r), Rational(1)};
  return sign_of(q);
}

namespace {

// Roots of a square-free polynomial with no rational roots found so far, inside (a, b)
// where p(a), p(b) != 0. Returns false and the rational root when a bisection point hits one.
bool isolate_in(const IntPoly& p, const SturmSequence& s, const Rational& a, const Rational& b, int count,
                std::vector<Interval>& out, Rational& hit) {
  if (count == 0) return true;
  if (count == 1) {
    out.emplace_back(a, b);
    return true;
  }
  Rational mid = (a + b) / 2;
  if (p.sign_at(mid) == 0) {
    hit = mid;
    return false;
  }
  int left = s.count(a, mid);
  return isolate_in(p, s, a, mid, left, out, hit) && isolate_in(p, s, mid, b, count - left, out, hit);
}

}  // namespace

std::vector<Interval> isolate_real_roots(const IntPoly& p) {
  if (p.is_zero()) throw DomainError("isolate_real_roots of the zero polynomial");
  IntPoly work = square_free_part(p);
  std::vector<Rational> rational_roots;
  std::vector<Interval> irr;
  while (true) {
    irr.clear();
    if (work.degree() < 1) break;
    Rational bound = cauchy_bound(work);
    SturmSequence s(work);
    Rational hit;
    if (isolate_in(work, s, -bound, bound, s.count(-bound, bound), irr, hit)) break;
    rational_roots.push_back(hit);
    work = exact_quotient(work, linear_for(hit));
  }

  // Shrink irrational isolating intervals away from the rational roots and from shared
  // bisection endpoints, so the closed intervals are pairwise disjoint. Each one is also pulled
  // strictly between two consecutive integers.
  std::vector<AlgebraicNumber> nums;
  for (const auto& iv : irr) {
    AlgebraicNumber a = AlgebraicNumber::isolated(work, iv);
    while (!a.is_rational()) {
      BigInt k;
      mpz_fdiv_q(k.get_mpz_t(), a.enclosure().hi.get_num_mpz_t(), a.enclosure().hi.get_den_mpz_t());
      if (Rational(k) < a.enclosure().lo) break;
      // An integer root that no bisection point hit.
      if (work.sign_at(Rational(k)) == 0) a = AlgebraicNumber::from_rational(Rational(k));
      else a = a.refine(a.enclosure().width() / 2);
    }
    nums.push_back(a);
  }
  for (const auto& r : rational_roots) nums.push_back(AlgebraicNumber::from_rational(r));
  auto by_lo = [](const AlgebraicNumber& x, const AlgebraicNumber& y) { return x.enclosure().lo < y.enclosure().lo; };
  std::sort(nums.begin(), nums.end(), by_lo);
  for (bool touching = true; touching;) {
    touching = false;
    for (std::size_t i = 0; i + 1 < nums.size(); ++i) {
      if (nums[i].enclosure().hi < nums[i + 1].enclosure().lo) continue;
      touching = true;
      for (std::size_t j : {i, i + 1}) {
        if (!nums[j].is_rational()) nums[j] = nums[j].refine(nums[j].enclosure().width() / 2);
      }
    }
    std::sort(nums.begin(), nums.end(), by_lo);
  }
  std::vector<Interval> out;
  for (const auto& a : nums) out.push_back(a.enclosure());
  return out;
}

std::vector<AlgebraicNumber> real_roots(const IntPoly& p) {
  IntPoly sf = square_free_part(p);
  std::vector<AlgebraicNumber> out;
  for (const auto& iv : isolate_real_roots(p)) out.push_back(AlgebraicNumber::isolated(sf, iv));
  return out;
}

AlgebraicNumber largest_real_root(const IntPoly& p) {
  auto roots = real_roots(p);
  if (roots.empty()) throw DomainError("polynomial has no real roots");
  const AlgebraicNumber& top = roots.back();
  // No root above the selected enclosure, up to the coefficient bound.
  IntPoly sf = square_free_part(p);
  if (sf.degree() >= 1) {
    Rational bound = cauchy_bound(sf);
    if (top.enclosure().hi < bound && SturmSequence(sf).count(top.enclosure().hi, bound) != 0) {
      throw DomainError("largest_real_root: maximality check failed");
    }
  }
  return top;
}

AlgebraicNumber salem_root(int n) { return largest_real_root(salem_polynomial(n)); }

AlgebraicNumber salem_ratio(int n) { return salem_root(n).reciprocal(); }

std::vector<SalemGrowth> verify_salem_growth(int n_lo, int n_hi) {
  if (n_lo < 4 || n_hi < n_lo) throw DomainError("verify_salem_growth requires 4 <= n_lo <= n_hi");
  std::vector<SalemGrowth> out;
  for (int n = n_lo; n <= n_hi; ++n) {
    AlgebraicNumber beta = salem_root(n);
    BigInt two_n;
    mpz_ui_pow_ui(two_n.get_mpz_t(), 2, static_cast<unsigned long>(n));
    IntPoly q = IntPoly::monomial(static_cast<unsigned>(n + 1)) - IntPoly(std::vector<BigInt>{two_n});
    out.push_back({n, beta.sign_of(q) > 0});
  }
  return out;
}

bool verify_salem_identity(int n) {
  IntPoly lhs = IntPoly{-1, 1} * salem_polynomial(n);
  IntPoly rhs = IntPoly::monomial(static_cast<unsigned>(n + 1)) - IntPoly::monomial(static_cast<unsigned>(n), 2) +
                IntPoly{-1, 2};
  return lhs == rhs;
}

}  // namespace multifrac
