#include "multifrac/measure.hpp"

#include "multifrac/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>
#include <unordered_map>

namespace multifrac {

namespace {

// Real order on positions; distinct vectors with equal values fall back to lexicographic order.
bool position_less(const RingContext& ctx, const Atom& a, const Atom& b) {
  if (a.enclosure.hi < b.enclosure.lo) return true;
  if (b.enclosure.hi < a.enclosure.lo) return false;
  int s = ctx.sign(ctx.sub(a.position, b.position));
  if (s != 0) return s < 0;
  return lex_compare(a.position, b.position) < 0;
}

// Exact sign of position - x, using the binary64 enclosure first.
int position_vs(const RingContext& ctx, const Atom& a, const Rational& x, const DInterval& xd) {
  if (a.enclosure.hi < xd.lo) return -1;
  if (a.enclosure.lo > xd.hi) return 1;
  return ctx.compare_rational(a.position, x);
}

}  // namespace

AtomMeasure::AtomMeasure(ContextPtr ctx, int depth, std::vector<Atom> atoms, Rational discretization_radius)
    : ctx_(std::move(ctx)), depth_(depth), atoms_(std::move(atoms)), radius_(std::move(discretization_radius)) {
  if (atoms_.empty()) throw DomainError("atom measure needs at least one atom");
  Rational total = 0;
  for (const auto& a : atoms_) {
    if (sgn(a.weight) <= 0) throw DomainError("atom weights must be positive");
    total += a.weight;
  }
  if (total != 1) throw DomainError("atom weights sum to " + total.get_str() + ", not 1");
  const RingContext& c = *ctx_;
  std::sort(atoms_.begin(), atoms_.end(), [&c](const Atom& a, const Atom& b) { return position_less(c, a, b); });
  for (std::size_t i = 1; i < atoms_.size(); ++i) {
    if (atoms_[i].position == atoms_[i - 1].position) throw DomainError("duplicate atom positions");
  }
}

BoxMasses::BoxMasses(int level, BigInt denominator, std::vector<std::pair<std::int64_t, BigInt>> numerators)
    : level_(level), denominator_(std::move(denominator)), numerators_(std::move(numerators)) {
  std::sort(numerators_.begin(), numerators_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  // Merge duplicates and drop zeros so equality is structural.
  std::vector<std::pair<std::int64_t, BigInt>> merged;
  for (auto& [box, n] : numerators_) {
    if (!merged.empty() && merged.back().first == box) {
      merged.back().second += n;
    } else {
      merged.emplace_back(box, std::move(n));
    }
  }
  std::erase_if(merged, [](const auto& p) { return p.second == 0; });
  numerators_ = std::move(merged);
}

Rational BoxMasses::mass(std::int64_t box) const {
  auto it = std::lower_bound(numerators_.begin(), numerators_.end(), box,
                             [](const auto& p, std::int64_t b) { return p.first < b; });
  if (it == numerators_.end() || it->first != box) return 0;
  Rational r(it->second, denominator_);
  r.canonicalize();
  return r;
}

Rational BoxMasses::total() const {
  BigInt s = 0;
  for (const auto& p : numerators_) s += p.second;
  Rational r(s, denominator_);
  r.canonicalize();
  return r;
}

BoxMasses BoxMasses::coarsen(int coarser) const {
  if (coarser > level_) throw DomainError("coarsen: target level is finer than the source");
  const int shift = level_ - coarser;
  std::vector<std::pair<std::int64_t, BigInt>> out;
  for (const auto& [box, n] : numerators_) {
    // Arithmetic shift floors toward -infinity, matching the half-open box convention.
    out.emplace_back(box >> shift, n);
  }
  return BoxMasses(coarser, denominator_, std::move(out));
}

bool operator==(const BoxMasses& a, const BoxMasses& b) {
  if (a.level_ != b.level_ || a.numerators_.size() != b.numerators_.size()) return false;
  for (std::size_t i = 0; i < a.numerators_.size(); ++i) {
    if (a.numerators_[i].first != b.numerators_[i].first) return false;
    // Compare as rationals: denominators may differ.
    if (a.numerators_[i].second * b.denominator_ != b.numerators_[i].second * a.denominator_) return false;
  }
  return true;
}

Rational discretization_radius(const EqualRatioIFS& ifs, int depth) {
  Interval hull = attractor_interval(ifs, pow2(-64));
  Rational diam = hull.hi - hull.lo;
  Rational lam = ifs.context()->lambda().enclosure().hi;
  return pow(lam, static_cast<unsigned long>(depth)) * diam / 2;
}

int depth_for_scale(const EqualRatioIFS& ifs, int m) {
  Interval hull = attractor_interval(ifs, pow2(-64));
  Rational diam = hull.hi - hull.lo;
  const Rational lam = ifs.context()->lambda().enclosure().hi;
  const Rational target = pow2(-m - 2);
  Rational value = diam;
  int n = 0;
  while (value > target) {
    value *= lam;
    ++n;
  }
  return n;
}

AtomMeasure discretize(const EqualRatioIFS& ifs, const ClassTable& classes) {
  const RingContext& ctx = *ifs.context();
  std::vector<Atom> atoms;
  atoms.reserve(classes.size());
  for (const auto& e : classes.entries()) {
    atoms.push_back({e.translation, ctx.enclosure_d(e.translation), e.weight});
  }
  return AtomMeasure(ifs.context(), classes.level(), std::move(atoms), discretization_radius(ifs, classes.level()));
}

AtomMeasure discretize(const EqualRatioIFS& ifs, int depth, const EnumerationOptions& opts) {
  return discretize(ifs, enumerate_classes(ifs, depth, opts));
}

namespace {

void check_alignment(const Rational& radius, int m, bool allow) {
  if (!allow && radius > pow2(-m - 2)) {
    throw DomainError("discretization radius " + decimal_up(radius, 12) + " exceeds 2^-" + std::to_string(m + 2) +
                      "; use a deeper discretisation or allow coarse atoms explicitly");
  }
}

BigInt lcm_of_denominators(const std::vector<Atom>& atoms) {
  BigInt den = 1;
  for (const auto& a : atoms) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), a.weight.get_den_mpz_t());
  return den;
}

}  // namespace

BoxMasses box_masses(const AtomMeasure& measure, int m, bool allow_coarse_atoms) {
  check_alignment(measure.discretization_radius(), m, allow_coarse_atoms);
  const RingContext& ctx = *measure.context();
  BigInt den = lcm_of_denominators(measure.atoms());
  std::map<std::int64_t, BigInt> acc;
  for (const auto& a : measure.atoms()) {
    BigInt box = ctx.floor_scaled(a.position, m);
    if (!box.fits_slong_p()) throw ResourceError("box index out of range", m);
    Rational num = a.weight * den;
    acc[box.get_si()] += num.get_num();
  }
  return BoxMasses(m, den, {acc.begin(), acc.end()});
}

namespace {

struct ClassSide {
  std::vector<Coords> coords;
  std::vector<DInterval> enclosure;
  std::vector<BigInt> numerator;  // weight * D^level
};

ClassSide prepare_side(const RingContext& ctx, const ClassTable& table, const BigInt& weight_den,
                       const Coords* scale) {
  BigInt d_pow;
  mpz_pow_ui(d_pow.get_mpz_t(), weight_den.get_mpz_t(), static_cast<unsigned long>(table.level()));
  ClassSide side;
  for (const auto& e : table.entries()) {
    Coords c = scale ? ctx.multiply(*scale, e.translation) : e.translation;
    side.enclosure.push_back(ctx.enclosure_d(c));
    side.coords.push_back(std::move(c));
    Rational n = e.weight * d_pow;
    if (n.get_den() != 1) throw DomainError("class weight is not a multiple of D^-level");
    side.numerator.push_back(n.get_num());
  }
  // Order by position so the inner loop walks boxes monotonically.
  std::vector<std::size_t> order(side.coords.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return side.enclosure[a].mid() < side.enclosure[b].mid(); });
  ClassSide sorted;
  for (auto i : order) {
    sorted.coords.push_back(std::move(side.coords[i]));
    sorted.enclosure.push_back(side.enclosure[i]);
    sorted.numerator.push_back(std::move(side.numerator[i]));
  }
  return sorted;
}

template <typename Accumulate>
std::uint64_t sweep_pairs(const RingContext& ctx, const ClassSide& left, const ClassSide& right, int m,
                          std::size_t begin, std::size_t end, Accumulate&& add) {
  std::uint64_t fallbacks = 0;
  const double scale = std::ldexp(1.0, m);
  for (std::size_t u = begin; u < end; ++u) {
    const DInterval& eu = left.enclosure[u];
    for (std::size_t v = 0; v < right.coords.size(); ++v) {
      DInterval e = eu + right.enclosure[v];
      double lo = std::floor(e.lo * scale);
      double hi = std::floor(e.hi * scale);
      std::int64_t box;
      if (lo == hi) {
        box = static_cast<std::int64_t>(lo);
      } else {
        ++fallbacks;
        BigInt b = ctx.floor_scaled(ctx.add(left.coords[u], right.coords[v]), m);
        box = b.get_si();
      }
      add(box, u, v);
    }
  }
  return fallbacks;
}

}  // namespace

BoxMasses box_masses_product(const EqualRatioIFS& ifs, int depth, int m, const ProductOptions& opts,
                             ProductStats* stats) {
  if (depth < 0) throw DomainError("depth must be non-negative");
  check_alignment(discretization_radius(ifs, depth), m, opts.allow_coarse_atoms);
  const RingContext& ctx = *ifs.context();
  const int a = depth - depth / 2;
  const int b = depth / 2;
  ClassTable left_table = enumerate_classes(ifs, a, opts.enumeration);
  ClassTable right_table = enumerate_classes(ifs, b, opts.enumeration);
  const BigInt D = ifs.weight_denominator();
  const Coords lambda_a = ctx.lambda_power(static_cast<unsigned>(a));
  ClassSide left = prepare_side(ctx, left_table, D, nullptr);
  ClassSide right = prepare_side(ctx, right_table, D, &lambda_a);

  BigInt denominator;
  mpz_pow_ui(denominator.get_mpz_t(), D.get_mpz_t(), static_cast<unsigned long>(depth));

  Interval hull = attractor_interval(ifs, pow2(-32));
  const std::int64_t box_lo = floor(Rational(hull.lo * pow2(m))).get_si() - 1;
  const std::int64_t box_hi = floor(Rational(hull.hi * pow2(m))).get_si() + 1;
  const std::uint64_t range = static_cast<std::uint64_t>(box_hi - box_lo + 1);

  ProductStats local;
  local.left_classes = left.coords.size();
  local.right_classes = right.coords.size();
  local.pairs = static_cast<std::uint64_t>(left.coords.size()) * right.coords.size();

  std::vector<std::pair<std::int64_t, BigInt>> out;
  const bool small_numbers = denominator < BigInt("18446744073709551615");
  const bool dense = range <= (std::uint64_t{1} << 26);

  if (small_numbers && dense) {
    std::vector<std::uint64_t> ln(left.numerator.size());
    std::vector<std::uint64_t> rn(right.numerator.size());
    for (std::size_t i = 0; i < ln.size(); ++i) ln[i] = left.numerator[i].get_ui();
    for (std::size_t i = 0; i < rn.size(); ++i) rn[i] = right.numerator[i].get_ui();
    unsigned threads = std::max(1u, opts.threads);
    // Cap total accumulator memory around 1 GiB.
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(1, (1ULL << 27) / range)));
    std::vector<std::vector<std::uint64_t>> acc(threads, std::vector<std::uint64_t>(range, 0));
    std::vector<std::uint64_t> fallbacks(threads, 0);
    auto work = [&](unsigned t) {
      const std::size_t n = left.coords.size();
      const std::size_t begin = n * t / threads;
      const std::size_t end = n * (t + 1) / threads;
      auto& bins = acc[t];
      fallbacks[t] = sweep_pairs(ctx, left, right, m, begin, end, [&](std::int64_t box, std::size_t u, std::size_t v) {
        if (box < box_lo || box > box_hi) throw DomainError("atom outside the attractor hull");
        bins[static_cast<std::size_t>(box - box_lo)] += ln[u] * rn[v];
      });
    };
    if (threads == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
      for (auto& th : pool) th.join();
    }
    for (unsigned t = 1; t < threads; ++t) {
      for (std::uint64_t i = 0; i < range; ++i) acc[0][i] += acc[t][i];
    }
    for (unsigned t = 0; t < threads; ++t) local.exact_fallbacks += fallbacks[t];
    for (std::uint64_t i = 0; i < range; ++i) {
      if (acc[0][i] != 0) out.emplace_back(box_lo + static_cast<std::int64_t>(i), BigInt(std::to_string(acc[0][i]), 10));
    }
  } else {
    std::unordered_map<std::int64_t, BigInt> acc;
    local.exact_fallbacks = sweep_pairs(ctx, left, right, m, 0, left.coords.size(),
                                        [&](std::int64_t box, std::size_t u, std::size_t v) {
                                          acc[box] += left.numerator[u] * right.numerator[v];
                                        });
    out.assign(acc.begin(), acc.end());
  }
  if (stats) *stats = local;
  return BoxMasses(m, denominator, std::move(out));
}

Rational ball_mass(const AtomMeasure& measure, const Rational& center, const Rational& radius) {
  if (sgn(radius) <= 0) throw DomainError("ball radius must be positive");
  const RingContext& ctx = *measure.context();
  const Rational lo = center - radius;
  const Rational hi = center + radius;
  const DInterval lod = DInterval::from(lo);
  const DInterval hid = DInterval::from(hi);
  const auto& atoms = measure.atoms();
  auto first = std::partition_point(atoms.begin(), atoms.end(),
                                    [&](const Atom& a) { return position_vs(ctx, a, lo, lod) < 0; });
  auto last = std::partition_point(first, atoms.end(),
                                   [&](const Atom& a) { return position_vs(ctx, a, hi, hid) <= 0; });
  Rational mass = 0;
  for (auto it = first; it != last; ++it) mass += it->weight;
  return mass;
}

std::vector<LocalDimensionRow> local_dimension_estimate(const EqualRatioIFS& ifs, const Rational& x,
                                                        const std::vector<int>& scales,
                                                        const EnumerationOptions& opts) {
  std::vector<LocalDimensionRow> rows;
  if (scales.empty()) return rows;
  const int finest = *std::max_element(scales.begin(), scales.end());
  if (*std::min_element(scales.begin(), scales.end()) < 1) throw DomainError("scales must be positive");
  AtomMeasure measure = discretize(ifs, depth_for_scale(ifs, finest), opts);
  for (int m : scales) {
    Rational mass = ball_mass(measure, x, pow2(-m));
    double value = std::numeric_limits<double>::infinity();
    if (sgn(mass) > 0) {
      HighFloat lg = log(to_high(mass)) / log(HighFloat(2));
      value = static_cast<double>(-lg / m);
    }
    rows.push_back({m, mass, value});
  }
  return rows;
}

}  // namespace multifrac
