#include "multifrac/interval.hpp"

#include "multifrac/errors.hpp"

#include <algorithm>

namespace multifrac {

Interval::Interval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
  if (lo > hi) throw DomainError("interval with lo > hi");
}

int Interval::sign() const {
  if (sgn(lo) > 0) return 1;
  if (sgn(hi) < 0) return -1;
  return 0;
}

std::string Interval::to_string(int digits) const {
  return "[" + decimal_down(lo, digits) + ", " + decimal_up(hi, digits) + "]";
}

Interval operator+(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }
Interval operator-(const Interval& a, const Interval& b) { return {a.lo - b.hi, a.hi - b.lo}; }
Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }
Interval operator+(const Interval& a, const Rational& c) { return {a.lo + c, a.hi + c}; }

Interval operator*(const Interval& a, const Rational& c) {
  if (sgn(c) >= 0) return {a.lo * c, a.hi * c};
  return {a.hi * c, a.lo * c};
}

Interval operator*(const Interval& a, const Interval& b) {
  if (sgn(a.lo) >= 0 && sgn(b.lo) >= 0) return {a.lo * b.lo, a.hi * b.hi};
  Rational p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) throw DomainError("interval division by an interval containing zero");
  // 1/x is decreasing on each sign-definite half line.
  return a * Interval(Rational(1 / b.hi), Rational(1 / b.lo));
}

Interval pow(const Interval& a, unsigned long e) {
  if (e == 0) return Interval::point(1);
  Rational l = pow(a.lo, e);
  Rational h = pow(a.hi, e);
  if (e % 2 == 1 || sgn(a.lo) >= 0) return {std::min(l, h), std::max(l, h)};
  if (sgn(a.hi) <= 0) return {h, l};
  return {Rational(0), std::max(l, h)};
}

DInterval DInterval::from(const Rational& x) {
  // mpq_get_d truncates toward zero; one ulp each way is enough.
  double d = x.get_d();
  if (Rational(d) == x) return {d, d};
  return {down(d), up(d)};
}

DInterval DInterval::from(const Interval& x) { return {from(x.lo).lo, from(x.hi).hi}; }

DInterval operator*(const DInterval& a, const DInterval& b) {
  if (a.lo >= 0 && b.lo >= 0) return {down(a.lo * b.lo), up(a.hi * b.hi)};
  double p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {down(*std::min_element(p, p + 4)), up(*std::max_element(p, p + 4))};
}

}  // namespace multifrac
