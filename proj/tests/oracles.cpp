#include "oracles.hpp"

#include <algorithm>
#include <stdexcept>

namespace oracle {

using multifrac::Rational;

HP to_hp(const Rational& x) {
  return HP(x.get_num().get_str()) / HP(x.get_den().get_str());
}

HP eval(const multifrac::IntPoly& p, const HP& x) {
  HP acc = 0;
  const auto& c = p.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + HP(it->get_str());
  return acc;
}

HP bisect_root(const multifrac::IntPoly& p, HP lo, HP hi) {
  int slo = boost::multiprecision::sign(eval(p, lo));
  if (slo == 0) return lo;
  if (boost::multiprecision::sign(eval(p, hi)) == 0) return hi;
  if (slo == boost::multiprecision::sign(eval(p, hi))) throw std::logic_error("bisect_root: no sign change");
  for (int i = 0; i < 600; ++i) {
    HP mid = (lo + hi) / 2;
    int s = boost::multiprecision::sign(eval(p, mid));
    if (s == 0) return mid;
    if (s == slo) lo = mid;
    else hi = mid;
  }
  return (lo + hi) / 2;
}

HP lambda_of(const multifrac::RingContext& ctx) {
  const auto& enc = ctx.lambda().enclosure();
  if (enc.is_point()) return to_hp(enc.lo);
  HP lo = std::max(HP(0), to_hp(enc.lo) - HP(1) / 8);
  HP hi = std::min(HP(1), to_hp(enc.hi) + HP(1) / 8);
  // Shrink the bracket onto the single sign change nearest the reported enclosure.
  HP step = (hi - lo) / 64;
  HP target = to_hp(enc.midpoint());
  HP best_lo = lo, best_hi = hi;
  HP best_dist = HP(10);
  for (HP a = lo; a < hi; a += step) {
    HP b = a + step;
    if (boost::multiprecision::sign(eval(ctx.modulus(), a)) * boost::multiprecision::sign(eval(ctx.modulus(), b)) <= 0) {
      HP d = abs((a + b) / 2 - target);
      if (d < best_dist) {
        best_dist = d;
        best_lo = a;
        best_hi = b;
      }
    }
  }
  return bisect_root(ctx.modulus(), best_lo, best_hi);
}

HP value(const multifrac::Coords& c, const HP& lambda) {
  HP acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * lambda + to_hp(*it);
  return acc;
}

std::vector<BruteClass> brute_classes(const multifrac::EqualRatioIFS& ifs, int k, bool keep_words) {
  HP lambda = lambda_of(*ifs.context());
  std::vector<HP> d;
  for (const auto& t : ifs.translations()) d.push_back(value(t, lambda));
  const int l = ifs.size();
  std::uint64_t total = 1;
  for (int i = 0; i < k; ++i) total *= static_cast<std::uint64_t>(l);

  struct Item {
    HP pos;
    Rational w;
    multifrac::Word word;
  };
  std::vector<Item> items;
  items.reserve(total);
  multifrac::Word word(static_cast<std::size_t>(k), 1);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t r = idx;
    for (int j = k - 1; j >= 0; --j) {
      word[static_cast<std::size_t>(j)] = static_cast<int>(r % static_cast<std::uint64_t>(l)) + 1;
      r /= static_cast<std::uint64_t>(l);
    }
    // S_{i_1} o ... o S_{i_k}(0) = d_{i_1} + lambda d_{i_2} + ... + lambda^(k-1) d_{i_k}
    HP pos = 0;
    HP p = 1;
    Rational w = 1;
    for (int j = 0; j < k; ++j) {
      pos += p * d[static_cast<std::size_t>(word[static_cast<std::size_t>(j)] - 1)];
      p *= lambda;
      w *= ifs.weights()[static_cast<std::size_t>(word[static_cast<std::size_t>(j)] - 1)];
    }
    items.push_back({pos, w, keep_words ? word : multifrac::Word{}});
  }
  std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.pos < b.pos; });

  std::vector<BruteClass> out;
  for (auto& it : items) {
    if (!out.empty() && abs(out.back().position - it.pos) < tiny()) {
      auto& c = out.back();
      ++c.multiplicity;
      c.weight += it.w;
      if (keep_words) c.words.push_back(std::move(it.word));
    } else {
      BruteClass c;
      c.position = it.pos;
      c.multiplicity = 1;
      c.weight = it.w;
      if (keep_words) c.words.push_back(std::move(it.word));
      out.push_back(std::move(c));
    }
  }
  if (keep_words)
    for (auto& c : out) std::sort(c.words.begin(), c.words.end());
  return out;
}

std::pair<HP, HP> hull(const multifrac::EqualRatioIFS& ifs) {
  HP lambda = lambda_of(*ifs.context());
  HP lo = 0, hi = 0;
  bool first = true;
  for (const auto& t : ifs.translations()) {
    HP v = value(t, lambda);
    if (first || v < lo) lo = v;
    if (first || v > hi) hi = v;
    first = false;
  }
  return {lo / (1 - lambda), hi / (1 - lambda)};
}

int dyadic_word_length(const multifrac::EqualRatioIFS& ifs, int n) {
  HP lambda = lambda_of(*ifs.context());
  auto [a, b] = hull(ifs);
  HP size = b - a;
  HP cell = pow(HP(2), -n);
  int len = 0;
  while (size > cell + tiny()) {
    size *= lambda;
    ++len;
  }
  return len;
}

namespace {

// floor(x 2^n), treating values within tiny() of an integer as that integer.
long long snapped_floor(const HP& x, int n) {
  HP s = x * pow(HP(2), n);
  HP r = round(s);
  if (abs(s - r) < tiny()) return r.convert_to<long long>();
  return floor(s).convert_to<long long>();
}

}  // namespace

std::uint64_t brute_t_dyadic(const multifrac::EqualRatioIFS& ifs, const std::vector<HP>& pos, int len, int n) {
  HP lambda = lambda_of(*ifs.context());
  auto [a, b] = hull(ifs);
  HP scale = pow(lambda, len);
  std::vector<std::pair<long long, long long>> boxes;
  for (const auto& t : pos) boxes.emplace_back(snapped_floor(t + scale * a, n), snapped_floor(t + scale * b, n));
  std::uint64_t best = 0;
  for (const auto& cand : boxes) {
    for (long long v : {cand.first, cand.second}) {
      std::uint64_t count = 0;
      for (const auto& bx : boxes)
        if (bx.first <= v && v <= bx.second) ++count;
      best = std::max(best, count);
    }
  }
  return best;
}

std::uint64_t brute_t_ball(const multifrac::EqualRatioIFS& ifs, const std::vector<HP>& pos, int n) {
  HP lambda = lambda_of(*ifs.context());
  auto [a, b] = hull(ifs);
  HP scale = pow(lambda, n);
  HP h = scale;  // window half-width lambda^n
  std::uint64_t best = 0;
  for (const auto& c : pos) {
    // Window [x - h, x + h] with its right end at the left end of image c.
    HP x = c + scale * a - h;
    std::uint64_t count = 0;
    for (const auto& o : pos) {
      HP lo = o + scale * a;
      HP hi = o + scale * b;
      if (lo <= x + h + tiny() && hi >= x - h - tiny()) ++count;
    }
    best = std::max(best, count);
  }
  return best;
}

Rational cantor_cdf(const Rational& x, int digits) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  Rational r = x;
  Rational out = 0;
  Rational bit = Rational(1, 2);
  for (int i = 0; i < digits; ++i) {
    r *= 3;
    mpz_class d = multifrac::floor(r);
    r -= d;
    if (d == 1) return out + bit;
    if (d == 2) out += bit;
    if (r == 0) return out;
    bit /= 2;
  }
  return out;
}

}  // namespace oracle
