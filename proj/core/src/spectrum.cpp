#include "multifrac/spectrum.hpp"

#include "multifrac/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace multifrac {

namespace {

// Natural log of a positive integer, 64-bit mantissa accuracy.
long double log_bigint(const BigInt& n) {
  if (n.fits_ulong_p()) return std::log(static_cast<long double>(n.get_ui()));
  long exp = 0;
  const double d = mpz_get_d_2exp(&exp, n.get_mpz_t());
  return std::log(static_cast<long double>(d)) + static_cast<long double>(exp) * std::log(2.0L);
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

double tau_from_masses(const BoxMasses& masses, double q) {
  if (!(q > 0)) throw DomainError("q must be positive, got " + fmt(q));
  if (masses.total() != 1) throw DomainError("box masses do not sum to 1");
  if (q == 1.0) return 0.0;
  const auto& nums = masses.numerators();
  // sum_Q (n_Q / D)^q = exp(q (L - log D)) * sum_Q exp(q (log n_Q - L)), L = max log n_Q.
  // Terms are in extended precision; with at most a few 10^7 terms the relative error of the sum
  // stays near 1e-12, far inside the 1e-9 budget after dividing by m log 2.
  std::vector<long double> logs;
  logs.reserve(nums.size());
  long double top = -std::numeric_limits<long double>::infinity();
  for (const auto& [box, n] : nums) {
    logs.push_back(log_bigint(n));
    top = std::max(top, logs.back());
  }
  const long double ql = static_cast<long double>(q);
  long double sum = 0.0L;
  long double carry = 0.0L;
  for (long double l : logs) {
    const long double term = std::exp(ql * (l - top)) - carry;
    const long double next = sum + term;
    carry = (next - sum) - term;
    sum = next;
  }
  const HighFloat total = log(HighFloat(sum)) + HighFloat(ql * top) - HighFloat(q) * log(to_high(Rational(masses.denominator())));
  HighFloat tau = total / (-HighFloat(masses.level()) * log(HighFloat(2)));
  return static_cast<double>(tau);
}

double tau_hat(const EqualRatioIFS& ifs, double q, int m, const SpectrumOptions& opts) {
  if (!(q > 0)) throw DomainError("q must be positive, got " + fmt(q));
  const int depth = depth_for_scale(ifs, m);
  return tau_from_masses(box_masses_product(ifs, depth, m, opts.product), q);
}

void validate_q_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw DomainError("q grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0)) {
      throw DomainError("q grid contains " + fmt(grid[i]) + "; only q > 0 is supported");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) throw DomainError("q grid must be strictly increasing");
  }
}

void check_concavity(SpectrumCurve& curve, double tol) {
  const auto& s = curve.samples;
  for (std::size_t i = 2; i < s.size(); ++i) {
    const double left = (s[i - 1].tau_hat - s[i - 2].tau_hat) / (s[i - 1].q - s[i - 2].q);
    const double right = (s[i].tau_hat - s[i - 1].tau_hat) / (s[i].q - s[i - 1].q);
    if (right - left > tol) {
      curve.warnings.push_back("concavity violated at q=" + fmt(s[i - 1].q) + ": slope rises by " +
                               fmt(right - left));
    }
  }
}

SpectrumCurve tau_curve(const BoxMasses& masses, const std::vector<double>& q_grid, double tol_concave) {
  validate_q_grid(q_grid);
  SpectrumCurve curve;
  curve.m = masses.level();
  curve.method = "dyadic";
  for (double q : q_grid) curve.samples.push_back({q, tau_from_masses(masses, q)});
  check_concavity(curve, tol_concave);
  return curve;
}

SpectrumCurve tau_curve(const EqualRatioIFS& ifs, const std::vector<double>& q_grid, int m,
                        const SpectrumOptions& opts) {
  validate_q_grid(q_grid);
  const int depth = depth_for_scale(ifs, m);
  SpectrumCurve curve = tau_curve(box_masses_product(ifs, depth, m, opts.product), q_grid, opts.tol_concave);
  curve.depth = depth;
  curve.method = "dyadic-product";
  curve.digest = ifs.digest();
  return curve;
}

double derivative_estimate(const SpectrumCurve& curve, double q) {
  const auto& s = curve.samples;
  if (s.size() < 2) throw DomainError("derivative needs at least two samples");
  if (q < s.front().q || q >= s.back().q) {
    throw DomainError("q=" + fmt(q) + " is outside [" + fmt(s.front().q) + ", " + fmt(s.back().q) + ")");
  }
  auto it = std::lower_bound(s.begin(), s.end(), q, [](const SpectrumSample& a, double v) { return a.q < v; });
  const std::size_t i = static_cast<std::size_t>(it - s.begin());
  if (i == 0) return (s[1].tau_hat - s[0].tau_hat) / (s[1].q - s[0].q);
  if (it != s.end() && it->q == q) {
    const double h = s[i + 1].q - s[i].q;
    const double hl = s[i].q - s[i - 1].q;
    if (std::fabs(h - hl) <= 1e-12 * std::max(1.0, std::fabs(q))) {
      const double d1 = (s[i + 1].tau_hat - s[i - 1].tau_hat) / (2 * h);
      if (i >= 2 && i + 2 < s.size() && std::fabs((s[i + 2].q - s[i].q) - 2 * h) <= 1e-12 * std::max(1.0, q) &&
          std::fabs((s[i].q - s[i - 2].q) - 2 * h) <= 1e-12 * std::max(1.0, q)) {
        const double d2 = (s[i + 2].tau_hat - s[i - 2].tau_hat) / (4 * h);
        return (4 * d1 - d2) / 3;
      }
      return d1;
    }
  }
  // Quadratic through the three samples nearest to q.
  std::size_t a = i == 0 ? 0 : i - 1;
  if (a + 2 >= s.size()) a = s.size() - 3;
  if (a > 0 && i + 1 < s.size() && std::fabs(s[i + 1].q - q) < std::fabs(s[a].q - q)) ++a;
  if (a + 2 >= s.size()) a = s.size() - 3;
  const double x0 = s[a].q, x1 = s[a + 1].q, x2 = s[a + 2].q;
  const double y0 = s[a].tau_hat, y1 = s[a + 1].tau_hat, y2 = s[a + 2].tau_hat;
  return y0 * ((q - x1) + (q - x2)) / ((x0 - x1) * (x0 - x2)) +
         y1 * ((q - x0) + (q - x2)) / ((x1 - x0) * (x1 - x2)) +
         y2 * ((q - x0) + (q - x1)) / ((x2 - x0) * (x2 - x1));
}

double tau_prime_infinity_proxy(const SpectrumCurve& curve) {
  if (curve.samples.empty()) throw DomainError("empty curve");
  return curve.samples.back().tau_hat / curve.samples.back().q;
}

std::vector<SpectrumSample> upper_concave_hull(const std::vector<SpectrumSample>& samples) {
  std::vector<SpectrumSample> hull;
  for (const auto& p : samples) {
    while (hull.size() >= 2) {
      const auto& o = hull[hull.size() - 2];
      const auto& a = hull.back();
      const double cross = (a.q - o.q) * (p.tau_hat - o.tau_hat) - (a.tau_hat - o.tau_hat) * (p.q - o.q);
      if (cross < 0) break;
      hull.pop_back();
    }
    hull.push_back(p);
  }
  return hull;
}

LegendreCurve legendre(const SpectrumCurve& curve) {
  if (curve.samples.size() < 3) throw DomainError("Legendre transform needs at least 3 samples");
  for (std::size_t i = 1; i < curve.samples.size(); ++i) {
    if (!(curve.samples[i].q > curve.samples[i - 1].q)) throw DomainError("samples must be strictly increasing");
  }
  LegendreCurve out;
  out.hull = upper_concave_hull(curve.samples);
  const auto& h = out.hull;
  for (std::size_t j = h.size() - 1; j-- > 0;) {
    const double alpha = (h[j + 1].tau_hat - h[j].tau_hat) / (h[j + 1].q - h[j].q);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& v : h) best = std::min(best, std::fma(alpha, v.q, -v.tau_hat));
    out.samples.push_back({alpha, best});
  }
  out.alpha_min = out.samples.front().alpha;
  out.alpha_max = out.samples.back().alpha;
  return out;
}

SpectrumCurve as_curve(const LegendreCurve& curve) {
  SpectrumCurve out;
  out.method = "legendre";
  for (const auto& s : curve.samples) out.samples.push_back({s.alpha, s.tau_star});
  return out;
}

TauInfinityBound tau_prime_infty_upper_bound(const EqualRatioIFS& ifs, int k_max, const EnumerationOptions& opts) {
  if (k_max < 1) throw DomainError("k_max must be at least 1");
  const RingContext& ctx = *ifs.context();
  const HighFloat log_lambda_hi = log(to_high(ctx.lambda().enclosure().hi));
  TauInfinityBound best;
  best.value = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= k_max; ++k) {
    ClassTable table = enumerate_classes(ifs, k, opts);
    Rational w = 0;
    for (const auto& e : table.entries()) w = std::max(w, e.weight);
    HighFloat v = log(to_high(w)) / (HighFloat(k) * log_lambda_hi);
    const double up = std::nextafter(static_cast<double>(v + HighFloat(1e-30)), 2.0);
    if (up < best.value) {
      best.value = up;
      best.k = k;
      best.max_weight = w;
    }
  }
  best.below_one = exceeds_lambda_power(ctx, best.max_weight, static_cast<unsigned>(best.k));
  return best;
}

bool dim_attractor_is_full(const EqualRatioIFS& ifs) {
  const RingContext& ctx = *ifs.context();
  std::vector<Coords> d = ifs.translations();
  std::sort(d.begin(), d.end(), [&ctx](const Coords& a, const Coords& b) { return ctx.sign(ctx.sub(a, b)) < 0; });
  const Coords lambda = ctx.lambda_power(1);
  const Coords one_minus = ctx.sub(ctx.constant(1), lambda);
  // S_i(hull) = [lambda a + d_i, lambda b + d_i] with b - a = (d_max - d_min)/(1 - lambda); consecutive
  // images overlap iff (1 - lambda)(d_{i+1} - d_i) <= lambda (d_max - d_min).
  const Coords reach = ctx.multiply(lambda, ctx.sub(d.back(), d.front()));
  for (std::size_t i = 0; i + 1 < d.size(); ++i) {
    const Coords gap = ctx.multiply(one_minus, ctx.sub(d[i + 1], d[i]));
    if (ctx.sign(ctx.sub(reach, gap)) < 0) return false;
  }
  return true;
}

PackingResult packing_sum(const AtomMeasure& measure, double q, const Rational& r) {
  if (!(q > 0) || sgn(r) <= 0) throw DomainError("packing needs q > 0 and r > 0");
  const RingContext& ctx = *measure.context();
  const auto& atoms = measure.atoms();
  const Rational two_r = 2 * r;
  const Rational minus_r = -r;
  PackingResult out;
  HighFloat sum = 0;
  std::size_t i = 0;
  while (i < atoms.size()) {
    const Coords& x = atoms[i].position;
    auto offset = [&](const Atom& a) { return ctx.sub(a.position, x); };
    auto first = std::partition_point(atoms.begin(), atoms.end(), [&](const Atom& a) {
      return ctx.compare_rational(offset(a), minus_r) < 0;
    });
    auto last = std::partition_point(first, atoms.end(), [&](const Atom& a) {
      return ctx.compare_rational(offset(a), r) <= 0;
    });
    Rational mass = 0;
    for (auto it = first; it != last; ++it) mass += it->weight;
    sum += pow(to_high(mass), HighFloat(q));
    ++out.balls;
    auto next = std::partition_point(atoms.begin() + static_cast<std::ptrdiff_t>(i), atoms.end(), [&](const Atom& a) {
      return ctx.compare_rational(offset(a), two_r) <= 0;
    });
    i = static_cast<std::size_t>(next - atoms.begin());
  }
  out.value = static_cast<double>(sum);
  return out;
}

namespace {

const Rational kProp5Weights[3] = {Rational(1, 4), Rational(5, 12), Rational(1, 3)};

HighFloat prop5_f(const HighFloat& q) {
  HighFloat s = 0;
  for (const auto& p : kProp5Weights) s += pow(to_high(p), q);
  return s;
}

HighFloat prop5_df(const HighFloat& q) {
  HighFloat s = 0;
  for (const auto& p : kProp5Weights) s += pow(to_high(p), q) * log(to_high(p));
  return s;
}

}  // namespace

Prop5Report prop5_casestudy() {
  Prop5Report r;
  r.f_at_one = kProp5Weights[0] + kProp5Weights[1] + kProp5Weights[2];
  const HighFloat f15 = prop5_f(HighFloat(3) / 2);
  r.f_15_squared = static_cast<double>(f15 * f15);
  HighFloat geo = 1;
  for (const auto& p : kProp5Weights) geo *= pow(to_high(p), to_high(p));
  r.weighted_geometric_mean = static_cast<double>(geo);

  r.ratio_increasing = true;
  HighFloat prev = 0;
  for (int i = 1; i <= 100; ++i) {
    const HighFloat q = 1 + HighFloat(i) / 100;
    const HighFloat g = log(prop5_f(q)) / (q - 1);
    if (i > 1 && !(g > prev)) r.ratio_increasing = false;
    prev = g;
  }

  const HighFloat log_lambda = log(to_high(Rational(171, 500)));
  auto local = [&](const HighFloat& q) { return prop5_df(q) / (prop5_f(q) * log_lambda); };
  const double a = static_cast<double>(local(HighFloat(3) / 2));
  const double b = static_cast<double>(local(HighFloat(2)));
  r.local_dim_lo = std::min(a, b);
  r.local_dim_hi = std::max(a, b);

  // lambda (sqrt 3 + 1) < 1  <=>  1/lambda - 1 > 0 and (1/lambda - 1)^2 > 3.
  r.lambda_transversal = Rational(1719, 5000);
  const Rational t = 1 / r.lambda_transversal - 1;
  r.transversality = sgn(t) > 0 && t * t > 3;
  return r;
}

}  // namespace multifrac
