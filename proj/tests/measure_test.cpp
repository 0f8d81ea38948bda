#include "multifrac/atom_cache.hpp"
#include "multifrac/errors.hpp"
#include "multifrac/measure.hpp"
#include "multifrac/systems.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <unistd.h>

using namespace multifrac;
namespace fs = std::filesystem;

namespace {

Rational pow3(int k) {
  BigInt p;
  mpz_ui_pow_ui(p.get_mpz_t(), 3, static_cast<unsigned long>(k));
  return Rational(p);
}

EqualRatioIFS golden() { return systems::bernoulli(systems::golden_context()); }
EqualRatioIFS salem4() { return systems::bernoulli(systems::salem_context(4)); }

std::map<std::int64_t, Rational> as_map(const BoxMasses& b) {
  std::map<std::int64_t, Rational> out;
  for (const auto& [v, num] : b.numerators()) out[v] = Rational(num) / b.denominator();
  return out;
}

fs::path scratch_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("multifrac-test-" + name + "-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Discretize, Examples) {
  auto c = discretize(systems::cantor(), 2);
  ASSERT_EQ(c.atoms().size(), 4u);
  const Rational expected[] = {Rational(0), Rational(2, 9), Rational(2, 3), Rational(8, 9)};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(c.atoms()[i].position[0], expected[i]);
    EXPECT_EQ(c.atoms()[i].weight, Rational(1, 4));
    EXPECT_LE(c.atoms()[i].enclosure.lo, expected[i].get_d());
    EXPECT_GE(c.atoms()[i].enclosure.hi, expected[i].get_d());
  }

  auto g = discretize(golden(), 3);
  ASSERT_EQ(g.atoms().size(), 7u);
  int heavy = 0;
  for (const auto& a : g.atoms())
    if (a.weight == Rational(1, 4)) {
      ++heavy;
      EXPECT_EQ(a.position, g.context()->zero());
    }
  EXPECT_EQ(heavy, 1);

  for (const auto& ifs : {systems::cantor(), golden(), salem4()}) {
    auto z = discretize(ifs, 0);
    ASSERT_EQ(z.atoms().size(), 1u);
    EXPECT_EQ(z.atoms()[0].weight, 1);
    EXPECT_EQ(z.atoms()[0].position, ifs.context()->zero());
  }
}

TEST(Discretize, SortedAndRadiusCertified) {
  for (const auto& ifs : {systems::cantor(), golden(), salem4()}) {
    oracle::HP lambda = oracle::lambda_of(*ifs.context());
    auto [a, b] = oracle::hull(ifs);
    for (int n : {1, 4, 9}) {
      auto m = discretize(ifs, n);
      Rational total = 0;
      for (std::size_t i = 0; i < m.atoms().size(); ++i) {
        total += m.atoms()[i].weight;
        if (i > 0) {
          EXPECT_LT(oracle::value(m.atoms()[i - 1].position, lambda), oracle::value(m.atoms()[i].position, lambda));
        }
      }
      EXPECT_EQ(total, 1);
      // Cantor attains equality; tiny() absorbs the HP rounding of 3^-n.
      EXPECT_GE(oracle::to_hp(m.discretization_radius()), pow(lambda, n) * (b - a) / 2 - oracle::tiny());
    }
  }
}

TEST(AtomMeasure, Validates) {
  auto ctx = RingContext::rational(Rational(1, 3));
  Atom a{ctx->constant(0), DInterval::point(0), Rational(1, 2)};
  Atom b{ctx->constant(Rational(1, 2)), DInterval::point(0.5), Rational(1, 3)};
  EXPECT_THROW(AtomMeasure(ctx, 1, {a, b}, Rational(1)), DomainError);
  b.weight = Rational(1, 2);
  Atom dup = a;
  EXPECT_THROW(AtomMeasure(ctx, 1, {a, dup}, Rational(1)), DomainError);
  EXPECT_NO_THROW(AtomMeasure(ctx, 1, {b, a}, Rational(1)));
}

TEST(DepthForScale, MatchesOracle) {
  for (const auto& ifs : {systems::cantor(), golden(), salem4(), systems::binary_lebesgue()}) {
    for (int m = 0; m <= 20; m += 4) {
      EXPECT_EQ(depth_for_scale(ifs, m), oracle::dyadic_word_length(ifs, m + 2)) << ifs.digest() << " m=" << m;
    }
  }
  EXPECT_EQ(depth_for_scale(salem4(), 20), 31);
}

TEST(BoxMasses, Examples) {
  for (int m : {0, 3, 7}) {
    auto b = box_masses(discretize(salem4(), 0), m, true);
    ASSERT_EQ(b.size(), 1u);
    EXPECT_EQ(b.total(), 1);
  }
  auto c = box_masses(discretize(systems::cantor(), 2), 2);
  auto mm = as_map(c);
  ASSERT_EQ(mm.size(), 3u);
  EXPECT_EQ(mm[0], Rational(1, 2));
  EXPECT_EQ(mm[2], Rational(1, 4));
  EXPECT_EQ(mm[3], Rational(1, 4));
  EXPECT_EQ(c.mass(1), 0);

  // Scale guard.
  EXPECT_THROW(box_masses(discretize(systems::cantor(), 2), 5), DomainError);
}

TEST(BoxMasses, EdgeAtomGoesRight) {
  // Lebesgue depth 3: atoms at k/8 sit exactly on box edges at m = 2.
  auto b = box_masses(discretize(systems::binary_lebesgue(), 3), 2, true);
  auto mm = as_map(b);
  ASSERT_EQ(mm.size(), 4u);
  for (auto& [v, w] : mm) EXPECT_EQ(w, Rational(1, 4)) << v;
}

TEST(BoxMasses, ConservationAndMonotoneRefinement) {
  std::mt19937_64 rng(17);
  for (const auto& ifs : {systems::cantor(), golden(), salem4()}) {
    for (int trial = 0; trial < 4; ++trial) {
      int fine = 3 + static_cast<int>(rng() % 8);
      int coarse = static_cast<int>(rng() % static_cast<std::uint64_t>(fine + 1));
      auto measure = discretize(ifs, depth_for_scale(ifs, fine));
      auto f = box_masses(measure, fine);
      EXPECT_EQ(f.total(), 1);
      EXPECT_EQ(f.coarsen(coarse), box_masses(measure, coarse));
      // Children sums, box by box.
      auto fm = as_map(f);
      for (const auto& [v, w] : as_map(box_masses(measure, coarse))) {
        Rational sum = 0;
        std::int64_t span = std::int64_t{1} << (fine - coarse);
        for (std::int64_t u = v * span; u < (v + 1) * span; ++u)
          if (auto it = fm.find(u); it != fm.end()) sum += it->second;
        EXPECT_EQ(sum, w);
      }
    }
  }
}

TEST(BoxMasses, ScaleAlignmentBetweenDepths) {
  for (const auto& ifs : {systems::cantor(), golden()}) {
    oracle::HP lambda = oracle::lambda_of(*ifs.context());
    auto [a, b] = oracle::hull(ifs);
    for (int m = 2; m <= 12; m += 2) {
      int n = depth_for_scale(ifs, m);
      auto coarse = discretize(ifs, n);
      auto fine = discretize(ifs, n + 1);
      auto bc = as_map(box_masses(coarse, m));
      auto bf = as_map(box_masses(fine, m));
      oracle::HP reach = pow(lambda, n) * (b - a);
      oracle::HP cell = pow(oracle::HP(2), -m);
      ASSERT_LT(2 * reach, cell);

      // Prefix sums of atom weights in real order.
      std::vector<oracle::HP> xs;
      std::vector<Rational> prefix{Rational(0)};
      for (const auto& atom : coarse.atoms()) {
        xs.push_back(oracle::value(atom.position, lambda));
        prefix.push_back(prefix.back() + atom.weight);
      }
      auto weight_near = [&](const oracle::HP& edge) {
        auto lo = std::lower_bound(xs.begin(), xs.end(), edge - reach) - xs.begin();
        auto hi = std::upper_bound(xs.begin(), xs.end(), edge + reach) - xs.begin();
        return prefix[static_cast<std::size_t>(hi)] - prefix[static_cast<std::size_t>(lo)];
      };

      std::map<std::int64_t, Rational> keys = bc;
      keys.insert(bf.begin(), bf.end());
      for (const auto& [v, unused] : keys) {
        Rational diff = abs(bc[v] - bf[v]);
        Rational near = weight_near(cell * v) + weight_near(cell * (v + 1));
        EXPECT_LE(diff, near) << "m=" << m << " v=" << v;
      }
    }
  }
}

TEST(BoxMassesProduct, EqualsDirectAggregation) {
  for (const auto& ifs : {systems::cantor(), golden(), salem4()}) {
    for (int m : {4, 8, 10}) {
      int n = depth_for_scale(ifs, m);
      if (n > 20) continue;
      auto direct = box_masses(discretize(ifs, n), m);
      for (unsigned threads : {1u, 3u}) {
        ProductOptions opts;
        opts.threads = threads;
        ProductStats stats;
        auto prod = box_masses_product(ifs, n, m, opts, &stats);
        EXPECT_EQ(prod, direct) << ifs.digest() << " m=" << m << " threads=" << threads;
        EXPECT_GT(stats.pairs, 0u);
      }
    }
  }
}

TEST(BallMass, Examples) {
  auto c = discretize(systems::cantor(), 2);
  EXPECT_EQ(ball_mass(c, Rational(1, 2), Rational(1)), 1);
  EXPECT_EQ(ball_mass(c, Rational(0), Rational(1, 4)), Rational(1, 2));
  EXPECT_EQ(ball_mass(c, Rational(5), Rational(1)), 0);
  // Closed boundary: atom at 2/9 lies on the edge of B(0, 2/9).
  EXPECT_EQ(ball_mass(c, Rational(0), Rational(2, 9)), Rational(1, 2));
  EXPECT_EQ(ball_mass(c, Rational(0), Rational(2, 9) - Rational(1, 1000)), Rational(1, 4));
}

TEST(BallMass, AgreesWithLinearScan) {
  std::mt19937_64 rng(23);
  auto ifs = salem4();
  auto measure = discretize(ifs, 10);
  oracle::HP lambda = oracle::lambda_of(*ifs.context());
  for (int t = 0; t < 200; ++t) {
    Rational center(static_cast<long>(rng() % 4801) - 2400, 1000);
    Rational radius(static_cast<long>(1 + rng() % 500), 1000);
    Rational expect = 0;
    for (const auto& a : measure.atoms()) {
      if (abs(oracle::value(a.position, lambda) - oracle::to_hp(center)) <= oracle::to_hp(radius)) expect += a.weight;
    }
    EXPECT_EQ(ball_mass(measure, center, radius), expect);
  }
}

TEST(LocalDimension, LebesgueIsExactlyOneMinusOneOverM) {
  std::vector<int> scales{10, 11, 12, 13, 14, 15, 16};
  auto rows = local_dimension_estimate(systems::binary_lebesgue(), Rational(1, 3), scales);
  ASSERT_EQ(rows.size(), scales.size());
  for (const auto& r : rows) {
    EXPECT_EQ(r.mass, pow2(1 - r.m));
    EXPECT_NEAR(r.value, static_cast<double>(r.m - 1) / r.m, 1e-12);
    EXPECT_LE(std::abs(r.value - 1.0), 1.0 / r.m + 1e-12);
  }
}

TEST(LocalDimension, CantorAtZero) {
  const double d = std::log(2.0) / std::log(3.0);
  std::vector<int> scales;
  for (int m = 4; m <= 16; ++m) scales.push_back(m);
  auto rows = local_dimension_estimate(systems::cantor(), Rational(0), scales);
  // One discretisation serves every scale: depth n from the finest m, each atom a 3^-n cylinder.
  const int n = oracle::dyadic_word_length(systems::cantor(), 16 + 2);
  std::vector<Rational> left{Rational(0)};
  for (int level = 1; level <= n; ++level) {
    std::vector<Rational> next;
    Rational step = Rational(2) / pow3(level);
    for (const auto& x : left) {
      next.push_back(x);
      next.push_back(x + step);
    }
    left.swap(next);
  }
  const Rational cylinder = Rational(1) / pow3(n);
  ASSERT_EQ(rows.size(), scales.size());
  for (const auto& r : rows) {
    Rational radius = pow2(-r.m);
    long count = std::count_if(left.begin(), left.end(), [&](const Rational& x) { return x <= radius; });
    EXPECT_EQ(r.mass, Rational(count) / pow2(n)) << r.m;
    // Sandwich by the Cantor function: F(r) <= mass <= F(r + 3^-n).
    EXPECT_GE(r.mass, oracle::cantor_cdf(radius)) << r.m;
    EXPECT_LE(r.mass, oracle::cantor_cdf(radius + cylinder)) << r.m;
    if (r.m >= 13) EXPECT_NEAR(r.value, d, 0.05) << r.m;
  }
}

TEST(LocalDimension, OutsideAttractorIsInfinite) {
  auto rows = local_dimension_estimate(systems::cantor(), Rational(2), {1, 4, 8});
  for (const auto& r : rows) {
    EXPECT_EQ(r.mass, 0);
    EXPECT_TRUE(std::isinf(r.value));
  }
}

TEST(AtomCache, RoundTripAndRevalidation) {
  auto dir = scratch_dir("cache");
  auto ifs = salem4();
  CacheOutcome first;
  auto t = cached_classes(ifs, 9, dir, {}, &first);
  EXPECT_FALSE(first.hit);
  CacheOutcome second;
  auto again = cached_classes(ifs, 9, dir, {}, &second);
  EXPECT_TRUE(second.hit);
  EXPECT_EQ(again.entries().size(), t.entries().size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_EQ(again.entries()[i].translation, t.entries()[i].translation);
    EXPECT_EQ(again.entries()[i].weight, t.entries()[i].weight);
    EXPECT_EQ(again.entries()[i].multiplicity, t.entries()[i].multiplicity);
  }

  fs::path file = dir / cache_file_name(ifs, 9);
  std::string reason;
  EXPECT_FALSE(load_class_table(file, ifs, 8, &reason).has_value());
  EXPECT_FALSE(reason.empty());
  EXPECT_FALSE(load_class_table(file, golden(), 9, &reason).has_value());

  // Corrupt one weight numerator: the weights no longer sum to 1.
  std::string text;
  {
    std::ifstream in(file);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  auto bar = text.rfind('|');
  ASSERT_NE(bar, std::string::npos);
  text.insert(bar + 2, "7");
  {
    std::ofstream out(file, std::ios::trunc);
    out << text;
  }
  EXPECT_FALSE(load_class_table(file, ifs, 9, &reason).has_value());
  CacheOutcome third;
  auto fixed = cached_classes(ifs, 9, dir, {}, &third);
  EXPECT_TRUE(third.rejected);
  EXPECT_FALSE(third.hit);
  EXPECT_EQ(fixed.total_weight(), 1);
  CacheOutcome fourth;
  cached_classes(ifs, 9, dir, {}, &fourth);
  EXPECT_TRUE(fourth.hit);

  {
    std::ofstream out(file, std::ios::trunc);
    out << "garbage\n";
  }
  EXPECT_FALSE(load_class_table(file, ifs, 9, &reason).has_value());
  fs::remove_all(dir);
}
