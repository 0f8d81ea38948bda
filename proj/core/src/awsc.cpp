#include "multifrac/awsc.hpp"

#include "multifrac/errors.hpp"

#include <algorithm>
#include <cmath>

namespace multifrac {

std::string to_string(WindowConvention c) {
  return c == WindowConvention::dyadic_box ? "dyadic" : "ball";
}

WindowConvention parse_convention(const std::string& text) {
  if (text == "dyadic") return WindowConvention::dyadic_box;
  if (text == "ball") return WindowConvention::centered_ball;
  throw DomainError("unknown window convention '" + text + "' (expected dyadic or ball)");
}

namespace {

// Image endpoints are E / (1 - lambda) for ring elements E; everything below works with E.
struct Geometry {
  const RingContext& ctx;
  Coords lambda;
  Coords one_minus;
  Coords dmin;
  Coords dmax;
  DInterval inv_one_minus;

  explicit Geometry(const EqualRatioIFS& ifs) : ctx(*ifs.context()) {
    lambda = ctx.lambda_power(1);
    one_minus = ctx.sub(ctx.constant(1), lambda);
    auto [lo, hi] = ifs.extreme_maps();
    dmin = ifs.translations()[static_cast<std::size_t>(lo)];
    dmax = ifs.translations()[static_cast<std::size_t>(hi)];
    inv_one_minus = DInterval::from(Interval::point(1) / (Interval::point(1) - ctx.lambda().enclosure()));
  }

  Coords scaled(const Coords& c, const Rational& s) const {
    Coords out(c);
    for (auto& x : out) x *= s;
    return out;
  }

  // floor(2^n E / (1 - lambda)), certified.
  BigInt floor_div(const Coords& e, int n) const {
    DInterval v = ctx.enclosure_d(e) * inv_one_minus;
    const double lo = std::floor(std::ldexp(v.lo, n));
    const double hi = std::floor(std::ldexp(v.hi, n));
    if (lo == hi && std::fabs(lo) < 9.0e15) return BigInt(static_cast<long>(lo));
    const Coords e2 = scaled(e, pow2(n));
    BigInt k(static_cast<long>(std::floor(std::ldexp(v.mid(), n))));
    auto above = [&](const BigInt& kk) { return ctx.sign(ctx.sub(e2, scaled(one_minus, Rational(kk)))) >= 0; };
    while (!above(k)) --k;
    while (above(k + 1)) ++k;
    return k;
  }
};

struct Event {
  Coords value;  // numerator over (1 - lambda)
  DInterval enclosure;
  int delta;     // +1 opens, -1 closes
};

std::uint64_t sweep_max(std::vector<std::pair<BigInt, int>> events) {
  // Integer box events: a close at B+1 is processed before an open at the same index.
  std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
    int c = cmp(a.first, b.first);
    if (c != 0) return c < 0;
    return a.second < b.second;
  });
  std::int64_t cur = 0;
  std::int64_t best = 0;
  for (const auto& e : events) {
    cur += e.second;
    best = std::max(best, cur);
  }
  return static_cast<std::uint64_t>(best);
}

}  // namespace

int awsc_word_length(const EqualRatioIFS& ifs, int n, WindowConvention convention) {
  if (n < 0) throw DomainError("n must be non-negative");
  if (convention == WindowConvention::centered_ball) return n;
  Geometry g(ifs);
  const RingContext& ctx = g.ctx;
  // lambda^k diam(K) <= 2^-n  <=>  lambda^k (dmax - dmin) <= 2^-n (1 - lambda).
  const Coords spread = ctx.sub(g.dmax, g.dmin);
  const Coords target = g.scaled(g.one_minus, pow2(-n));
  Coords lhs = spread;
  int k = 0;
  while (ctx.sign(ctx.sub(target, lhs)) < 0) {
    lhs = ctx.multiply_by_lambda(lhs);
    ++k;
  }
  return k;
}

std::uint64_t t_n_count(const EqualRatioIFS& ifs, const ClassTable& table, int n, WindowConvention convention) {
  const int length = awsc_word_length(ifs, n, convention);
  if (table.level() != length) {
    throw DomainError("class table has level " + std::to_string(table.level()) + ", scale " + std::to_string(n) +
                      " needs " + std::to_string(length));
  }
  Geometry g(ifs);
  const RingContext& ctx = g.ctx;
  const Coords lam_k = ctx.lambda_power(static_cast<unsigned>(length));
  const Coords left_off = ctx.multiply(lam_k, g.dmin);
  const Coords right_off = ctx.multiply(lam_k, g.dmax);

  if (convention == WindowConvention::dyadic_box) {
    // K_u = [L, R] meets [v 2^-n, (v+1) 2^-n) iff floor(2^n L) <= v <= floor(2^n R).
    std::vector<std::pair<BigInt, int>> events;
    events.reserve(2 * table.size());
    for (const auto& e : table.entries()) {
      const Coords base = ctx.multiply(g.one_minus, e.translation);
      events.emplace_back(g.floor_div(ctx.add(base, left_off), n), +1);
      events.emplace_back(g.floor_div(ctx.add(base, right_off), n) + 1, -1);
    }
    return sweep_max(std::move(events));
  }

  // Centred windows: K_u meets [x - lambda^n, x + lambda^n] iff x lies in [L - lambda^n, R + lambda^n].
  const Coords pad = ctx.multiply(lam_k, g.one_minus);
  std::vector<Event> events;
  events.reserve(2 * table.size());
  for (const auto& e : table.entries()) {
    const Coords base = ctx.multiply(g.one_minus, e.translation);
    Coords lo = ctx.sub(ctx.add(base, left_off), pad);
    Coords hi = ctx.add(ctx.add(base, right_off), pad);
    DInterval elo = ctx.enclosure_d(lo);
    DInterval ehi = ctx.enclosure_d(hi);
    events.push_back({std::move(lo), elo, +1});
    events.push_back({std::move(hi), ehi, -1});
  }
  // Closed intervals: at equal positions opens come first.
  std::sort(events.begin(), events.end(), [&ctx](const Event& a, const Event& b) {
    if (a.enclosure.hi < b.enclosure.lo) return true;
    if (b.enclosure.hi < a.enclosure.lo) return false;
    int s = ctx.sign(ctx.sub(a.value, b.value));
    if (s != 0) return s < 0;
    return a.delta > b.delta;
  });
  std::int64_t cur = 0;
  std::int64_t best = 0;
  for (const auto& e : events) {
    cur += e.delta;
    best = std::max(best, cur);
  }
  return static_cast<std::uint64_t>(best);
}

std::uint64_t t_n_count(const EqualRatioIFS& ifs, int n, WindowConvention convention,
                        const EnumerationOptions& opts) {
  return t_n_count(ifs, enumerate_classes(ifs, awsc_word_length(ifs, n, convention), opts), n, convention);
}

AwscProfile awsc_profile(const EqualRatioIFS& ifs, int n_lo, int n_hi, WindowConvention convention,
                         const ClassSource& source) {
  AwscProfile profile;
  profile.convention = convention;
  for (int n = std::max(n_lo, 0); n <= n_hi; ++n) {
    const ClassTable table = source(awsc_word_length(ifs, n, convention));
    const std::uint64_t t = t_n_count(ifs, table, n, convention);
    const double ratio = n == 0 ? 0.0 : std::log2(static_cast<double>(t)) / n;
    profile.rows.push_back({n, t, ratio});
  }
  return profile;
}

AwscProfile awsc_profile(const EqualRatioIFS& ifs, int n_lo, int n_hi, WindowConvention convention,
                         const EnumerationOptions& opts) {
  return awsc_profile(ifs, n_lo, n_hi, convention,
                      [&](int level) { return enumerate_classes(ifs, level, opts); });
}

bool profile_within(const AwscProfile& profile, double bound) {
  return profile.rows.empty() || profile.rows.back().log2_tn_over_n <= bound;
}

namespace {

long checked_add(long a, long b) {
  long r = 0;
  if (__builtin_add_overflow(a, b, &r)) throw ResourceError("Y-set coordinates overflow 64 bits", 0);
  return r;
}

long checked_mul(long a, long b) {
  long r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw ResourceError("Y-set coordinates overflow 64 bits", 0);
  return r;
}

Coords to_coords(const long* row, std::size_t d) {
  Coords c(d);
  for (std::size_t i = 0; i < d; ++i) c[i] = Rational(row[i]);
  return c;
}

}  // namespace

YSetGap yset_min_gap(const AlgebraicNumber& beta, int m, int degree_cap, std::uint64_t budget,
                     const Rational& width) {
  if (m < 1 || degree_cap < 0) throw DomainError("need m >= 1 and degree_cap >= 0");
  if (beta.compare(Rational(1)) <= 0) throw DomainError("beta must exceed 1");
  const IntPoly& p = beta.minpoly();
  if (!p.is_monic()) throw DomainError("beta must be an algebraic integer (monic minimal polynomial)");
  const ContextPtr ctx = RingContext::algebraic(p, beta);
  const std::size_t d = static_cast<std::size_t>(p.degree());
  std::vector<long> neg_coeff(d);
  for (std::size_t i = 0; i < d; ++i) {
    const BigInt c = -p.coeff(static_cast<int>(i));
    if (!c.fits_slong_p()) throw DomainError("minimal polynomial coefficients exceed 64 bits");
    neg_coeff[i] = c.get_si();
  }

  // Horner over digits: level j holds sum_{i<=j} e_i beta^(j-i), deduplicated.
  std::vector<long> rows;
  for (long e = -m; e <= m; ++e) {
    std::vector<long> r(d, 0);
    r[0] = e;
    rows.insert(rows.end(), r.begin(), r.end());
  }
  auto dedup = [d](std::vector<long>& flat) {
    const std::size_t n = flat.size() / d;
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    auto row_less = [&](std::size_t a, std::size_t b) {
      return std::lexicographical_compare(flat.begin() + static_cast<std::ptrdiff_t>(a * d),
                                          flat.begin() + static_cast<std::ptrdiff_t>((a + 1) * d),
                                          flat.begin() + static_cast<std::ptrdiff_t>(b * d),
                                          flat.begin() + static_cast<std::ptrdiff_t>((b + 1) * d));
    };
    std::sort(idx.begin(), idx.end(), row_less);
    std::vector<long> out;
    out.reserve(flat.size());
    for (std::size_t k = 0; k < n; ++k) {
      if (k > 0 && !row_less(idx[k - 1], idx[k])) continue;
      out.insert(out.end(), flat.begin() + static_cast<std::ptrdiff_t>(idx[k] * d),
                 flat.begin() + static_cast<std::ptrdiff_t>((idx[k] + 1) * d));
    }
    flat = std::move(out);
  };
  for (int level = 1; level <= degree_cap; ++level) {
    const std::size_t n = rows.size() / d;
    if (static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(2 * m + 1) > budget) {
      throw ResourceError("Y-set exceeds the element budget", level);
    }
    std::vector<long> next;
    next.reserve(n * static_cast<std::size_t>(2 * m + 1) * d);
    std::vector<long> shifted(d);
    for (std::size_t r = 0; r < n; ++r) {
      const long* row = &rows[r * d];
      const long top = row[d - 1];
      for (std::size_t i = 0; i < d; ++i) {
        shifted[i] = checked_add(i ? row[i - 1] : 0, checked_mul(top, neg_coeff[i]));
      }
      for (long e = -m; e <= m; ++e) {
        next.insert(next.end(), shifted.begin(), shifted.end());
        next[next.size() - d] = checked_add(next[next.size() - d], e);
      }
    }
    dedup(next);
    rows = std::move(next);
  }

  const std::size_t n = rows.size() / d;
  const RingContext& rc = *ctx;
  std::vector<DInterval> enc(n);
  for (std::size_t i = 0; i < n; ++i) enc[i] = rc.enclosure_d(to_coords(&rows[i * d], d));
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (enc[a].hi < enc[b].lo) return true;
    if (enc[b].hi < enc[a].lo) return false;
    return rc.sign(rc.sub(to_coords(&rows[a * d], d), to_coords(&rows[b * d], d))) < 0;
  });

  std::vector<std::vector<long>> gaps;
  std::vector<DInterval> gap_enc;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const long* a = &rows[order[k] * d];
    const long* b = &rows[order[k + 1] * d];
    std::vector<long> diff(d);
    for (std::size_t i = 0; i < d; ++i) diff[i] = b[i] - a[i];
    DInterval e = enc[order[k + 1]] - enc[order[k]];
    if (e.hi <= 0 || e.lo <= 0) {
      // Possibly equal reals: only a positive exact sign makes it a gap.
      if (rc.sign(to_coords(diff.data(), d)) <= 0) continue;
      e.lo = std::max(e.lo, 0.0);
    }
    gaps.push_back(std::move(diff));
    gap_enc.push_back(e);
  }
  if (gaps.empty()) throw DomainError("Y-set has a single element");
  double best_hi = std::numeric_limits<double>::infinity();
  for (const auto& e : gap_enc) best_hi = std::min(best_hi, e.hi);
  std::size_t best = gaps.size();
  for (std::size_t k = 0; k < gaps.size(); ++k) {
    if (gap_enc[k].lo > best_hi) continue;
    if (best == gaps.size() ||
        rc.sign(rc.sub(to_coords(gaps[k].data(), d), to_coords(gaps[best].data(), d))) < 0) {
      best = k;
    }
  }
  YSetGap out;
  out.witness = gaps[best];
  out.elements = n;
  out.gap = rc.enclosure(to_coords(gaps[best].data(), d), width);
  return out;
}

}  // namespace multifrac
