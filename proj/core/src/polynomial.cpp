#include "multifrac/polynomial.hpp"

#include "multifrac/errors.hpp"

#include <algorithm>

namespace multifrac {

IntPoly::IntPoly(std::vector<BigInt> ascending) : coeffs_(std::move(ascending)) { trim(); }

IntPoly::IntPoly(std::initializer_list<long> ascending) {
  for (long c : ascending) coeffs_.emplace_back(c);
  trim();
}

void IntPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

IntPoly IntPoly::from_rational(std::span<const Rational> ascending) {
  BigInt den = 1;
  for (const auto& c : ascending) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  std::vector<BigInt> out;
  out.reserve(ascending.size());
  for (const auto& c : ascending) {
    Rational scaled = c * den;
    out.push_back(scaled.get_num());
  }
  return IntPoly(std::move(out)).primitive_part();
}

IntPoly IntPoly::monomial(unsigned degree, const BigInt& c) {
  std::vector<BigInt> v(degree + 1, BigInt(0));
  v[degree] = c;
  return IntPoly(std::move(v));
}

BigInt IntPoly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(coeffs_.size())) return 0;
  return coeffs_[static_cast<std::size_t>(i)];
}

Rational IntPoly::eval(const Rational& x) const {
  // Horner on numerator/denominator separately: p(a/b) * b^d is an integer.
  if (is_zero()) return 0;
  const BigInt& a = x.get_num();
  const BigInt& b = x.get_den();
  BigInt acc = coeffs_.back();
  BigInt bpow = 1;
  for (int i = degree() - 1; i >= 0; --i) {
    bpow *= b;
    acc = acc * a + coeffs_[static_cast<std::size_t>(i)] * bpow;
  }
  Rational r(acc, bpow);
  r.canonicalize();
  return r;
}

Interval IntPoly::eval(const Interval& x) const {
  if (is_zero()) return Interval::point(0);
  Interval acc = Interval::point(Rational(coeffs_.back()));
  for (int i = degree() - 1; i >= 0; --i) {
    acc = acc * x + Rational(coeffs_[static_cast<std::size_t>(i)]);
  }
  return acc;
}

IntPoly IntPoly::derivative() const {
  if (degree() < 1) return {};
  std::vector<BigInt> d;
  for (int i = 1; i <= degree(); ++i) d.push_back(coeffs_[static_cast<std::size_t>(i)] * i);
  return IntPoly(std::move(d));
}

IntPoly IntPoly::reversed() const {
  std::vector<BigInt> r(coeffs_.rbegin(), coeffs_.rend());
  return IntPoly(std::move(r));
}

BigInt IntPoly::content() const {
  BigInt g = 0;
  for (const auto& c : coeffs_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

IntPoly IntPoly::primitive_part() const {
  if (is_zero()) return {};
  BigInt g = content();
  if (leading() < 0) g = -g;
  std::vector<BigInt> out;
  for (const auto& c : coeffs_) out.push_back(c / g);
  return IntPoly(std::move(out));
}

IntPoly IntPoly::operator-() const {
  std::vector<BigInt> out;
  for (const auto& c : coeffs_) out.push_back(-c);
  return IntPoly(std::move(out));
}

std::string IntPoly::to_string(char var) const {
  if (is_zero()) return "0";
  std::string s;
  for (int i = degree(); i >= 0; --i) {
    const BigInt& c = coeffs_[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    BigInt a = abs(c);
    if (s.empty()) {
      if (c < 0) s += "-";
    } else {
      s += c < 0 ? " - " : " + ";
    }
    if (a != 1 || i == 0) s += a.get_str();
    if (i >= 1) s += var;
    if (i >= 2) s += "^" + std::to_string(i);
  }
  return s;
}

IntPoly operator+(const IntPoly& a, const IntPoly& b) {
  std::vector<BigInt> out(static_cast<std::size_t>(std::max(a.degree(), b.degree()) + 1), BigInt(0));
  for (int i = 0; i <= a.degree(); ++i) out[static_cast<std::size_t>(i)] += a.coeffs()[static_cast<std::size_t>(i)];
  for (int i = 0; i <= b.degree(); ++i) out[static_cast<std::size_t>(i)] += b.coeffs()[static_cast<std::size_t>(i)];
  return IntPoly(std::move(out));
}

IntPoly operator-(const IntPoly& a, const IntPoly& b) { return a + (-b); }

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<BigInt> out(static_cast<std::size_t>(a.degree() + b.degree() + 1), BigInt(0));
  for (int i = 0; i <= a.degree(); ++i) {
    for (int j = 0; j <= b.degree(); ++j) {
      out[static_cast<std::size_t>(i + j)] += a.coeffs()[static_cast<std::size_t>(i)] * b.coeffs()[static_cast<std::size_t>(j)];
    }
  }
  return IntPoly(std::move(out));
}

IntPoly salem_polynomial(int n) {
  if (n < 4) throw DomainError("salem_polynomial requires n >= 4, got " + std::to_string(n));
  std::vector<BigInt> c(static_cast<std::size_t>(n + 1), BigInt(-1));
  c.front() = 1;
  c.back() = 1;
  return IntPoly(std::move(c));
}

namespace {

std::vector<Rational> to_rational(const IntPoly& p) {
  std::vector<Rational> out;
  for (const auto& c : p.coeffs()) out.emplace_back(c);
  return out;
}

void trim(std::vector<Rational>& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

// Quotient and remainder over Q.
std::pair<std::vector<Rational>, std::vector<Rational>> divmod(std::span<const Rational> a,
                                                               std::span<const Rational> b) {
  std::vector<Rational> r(a.begin(), a.end());
  std::vector<Rational> bb(b.begin(), b.end());
  trim(r);
  trim(bb);
  if (bb.empty()) throw DomainError("polynomial division by zero");
  std::vector<Rational> q;
  const int db = static_cast<int>(bb.size()) - 1;
  if (static_cast<int>(r.size()) - 1 >= db) q.assign(r.size() - bb.size() + 1, Rational(0));
  while (!r.empty() && static_cast<int>(r.size()) - 1 >= db) {
    const int shift = static_cast<int>(r.size()) - 1 - db;
    Rational f = r.back() / bb.back();
    q[static_cast<std::size_t>(shift)] = f;
    for (int i = 0; i <= db; ++i) r[static_cast<std::size_t>(i + shift)] -= f * bb[static_cast<std::size_t>(i)];
    r.back() = 0;
    trim(r);
  }
  return {q, r};
}

}  // namespace

std::vector<Rational> remainder(std::span<const Rational> a, std::span<const Rational> b) {
  return divmod(a, b).second;
}

IntPoly gcd(const IntPoly& a, const IntPoly& b) {
  IntPoly x = a.primitive_part();
  IntPoly y = b.primitive_part();
  while (!y.is_zero()) {
    auto rx = to_rational(x);
    auto ry = to_rational(y);
    auto r = remainder(rx, ry);
    x = y;
    y = IntPoly::from_rational(r);
  }
  return x.primitive_part();
}

IntPoly exact_quotient(const IntPoly& a, const IntPoly& b) {
  auto ra = to_rational(a);
  auto rb = to_rational(b);
  auto [q, r] = divmod(ra, rb);
  if (!r.empty()) throw DomainError("exact_quotient: nonzero remainder");
  return IntPoly::from_rational(q);
}

IntPoly square_free_part(const IntPoly& p) {
  if (p.degree() < 1) return p.primitive_part();
  IntPoly g = gcd(p, p.derivative());
  if (g.degree() < 1) return p.primitive_part();
  return exact_quotient(p, g);
}

SturmSequence::SturmSequence(const IntPoly& p) {
  if (p.is_zero()) throw DomainError("Sturm sequence of the zero polynomial");
  chain_.push_back(p);
  if (p.degree() < 1) return;
  IntPoly d = p.derivative().primitive_part();
  if (sgn(d.leading()) != sgn(p.leading())) d = -d;
  chain_.push_back(std::move(d));
  while (true) {
    auto a = to_rational(chain_[chain_.size() - 2]);
    auto b = to_rational(chain_.back());
    auto r = remainder(a, b);
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    // Rescale by a positive constant only; primitive_part fixes the sign, so restore it.
    IntPoly next = IntPoly::from_rational(r);
    if (sgn(next.leading()) != sgn(r.back())) next = -next;
    chain_.push_back(std::move(next));
  }
}

int SturmSequence::variations(const Rational& x) const {
  int v = 0;
  int last = 0;
  for (const auto& q : chain_) {
    int s = q.sign_at(x);
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

int SturmSequence::count(const Rational& a, const Rational& b) const {
  return variations(a) - variations(b);
}

Rational cauchy_bound(const IntPoly& p) {
  if (p.degree() < 1) return 1;
  Rational m = 0;
  for (int i = 0; i < p.degree(); ++i) {
    Rational r(abs(p.coeffs()[static_cast<std::size_t>(i)]), abs(p.leading()));
    r.canonicalize();
    if (r > m) m = r;
  }
  return m + 1;
}

}  // namespace multifrac
