#pragma once

#include "multifrac/ifs.hpp"

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

namespace multifrac {

struct Atom {
  Coords position;      // S_[u](0), canonical
  DInterval enclosure;  // exact binary64 endpoints around the true position
  Rational weight;
};

/// Finite-atom approximation of a self-similar measure: one atom per level-n class,
/// placed at S_[u](0) with the aggregated class weight. Atoms are sorted by real position.
class AtomMeasure {
 public:
  /// Validates positive weights summing to 1 and pairwise-distinct positions; sorts atoms.
  AtomMeasure(ContextPtr ctx, int depth, std::vector<Atom> atoms, Rational discretization_radius);

  const ContextPtr& context() const { return ctx_; }
  int depth() const { return depth_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  /// Every atom's mass is spread over the true measure within this distance of its position.
  const Rational& discretization_radius() const { return radius_; }

 private:
  ContextPtr ctx_;
  int depth_;
  std::vector<Atom> atoms_;
  Rational radius_;
};

/// Masses of the half-open dyadic boxes [v 2^-m, (v+1) 2^-m), stored as integer numerators
/// over a common denominator. Only nonzero boxes are kept, sorted by index.
class BoxMasses {
 public:
  BoxMasses(int level, BigInt denominator, std::vector<std::pair<std::int64_t, BigInt>> numerators);

  int level() const { return level_; }
  const BigInt& denominator() const { return denominator_; }
  const std::vector<std::pair<std::int64_t, BigInt>>& numerators() const { return numerators_; }
  std::size_t size() const { return numerators_.size(); }
  Rational mass(std::int64_t box) const;
  Rational total() const;
  /// Sums children into level `coarser` <= level().
  BoxMasses coarsen(int coarser) const;

  friend bool operator==(const BoxMasses& a, const BoxMasses& b);

 private:
  int level_;
  BigInt denominator_;
  std::vector<std::pair<std::int64_t, BigInt>> numerators_;
};

/// Certified upper bound on lambda^n diam(K) / 2.
Rational discretization_radius(const EqualRatioIFS& ifs, int depth);

/// Smallest n with lambda^n diam(K) <= 2^(-m-2), decided on certified upper bounds.
int depth_for_scale(const EqualRatioIFS& ifs, int m);

AtomMeasure discretize(const EqualRatioIFS& ifs, int depth, const EnumerationOptions& opts = {});
AtomMeasure discretize(const EqualRatioIFS& ifs, const ClassTable& classes);

/// Assigns each atom to its half-open box (certified floor of position * 2^m).
/// Requires discretization_radius <= 2^(-m-2) unless `allow_coarse_atoms`.
BoxMasses box_masses(const AtomMeasure& measure, int m, bool allow_coarse_atoms = false);

struct ProductOptions {
  EnumerationOptions enumeration;
  unsigned threads = 1;
  bool allow_coarse_atoms = false;
};

struct ProductStats {
  std::size_t left_classes = 0;
  std::size_t right_classes = 0;
  std::uint64_t pairs = 0;
  std::uint64_t exact_fallbacks = 0;
};

/// Box masses of the depth-n atom measure without materialising the depth-n class table:
/// every depth-n word splits as u v with |u| = a, |v| = n - a, its translation is
/// t_u + lambda^a t_v and its weight w_u w_v. Summing per box over all class pairs gives
/// exactly box_masses(discretize(ifs, n), m).
BoxMasses box_masses_product(const EqualRatioIFS& ifs, int depth, int m, const ProductOptions& opts = {},
                             ProductStats* stats = nullptr);

/// Total weight of atoms with position in [center - radius, center + radius].
Rational ball_mass(const AtomMeasure& measure, const Rational& center, const Rational& radius);

struct LocalDimensionRow {
  int m;
  Rational mass;  // ball mass at radius 2^-m
  double value;   // -log2(mass)/m, +infinity when mass is 0
};

/// -log2 mu(B(x, 2^-m)) / m for each m, from one discretisation fine enough for the largest m.
std::vector<LocalDimensionRow> local_dimension_estimate(const EqualRatioIFS& ifs, const Rational& x,
                                                        const std::vector<int>& scales,
                                                        const EnumerationOptions& opts = {});

}  // namespace multifrac
