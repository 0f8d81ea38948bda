#pragma once

// Independent reference computations used by the unit and acceptance tests. Nothing here
// goes through the canonical-form machinery: values are plain 200-digit MPFR floats and
// lambda comes from bisection on the modulus.

#include "multifrac/ifs.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <map>
#include <vector>

namespace oracle {

using HP = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<200>>;

HP to_hp(const multifrac::Rational& x);

/// Polynomial with ascending integer coefficients at x.
HP eval(const multifrac::IntPoly& p, const HP& x);

/// Root of p in (lo, hi) by 600 bisection steps; p must change sign on the bracket.
HP bisect_root(const multifrac::IntPoly& p, HP lo, HP hi);

/// lambda of a context as an HP value (rational contexts are exact; algebraic ones are bisected
/// on the modulus inside the enclosure widened to (lo - 1/8, hi + 1/8) clipped to (0, 1)).
HP lambda_of(const multifrac::RingContext& ctx);

HP value(const multifrac::Coords& c, const HP& lambda);

/// Snap-to-equal tolerance for values that are algebraic numbers of bounded height.
inline HP tiny() { return HP("1e-120"); }

struct BruteClass {
  HP position;
  std::uint64_t multiplicity = 0;
  multifrac::Rational weight;
  std::vector<multifrac::Word> words;
};

/// Every word of length k, evaluated as sum_j d_{i_j} lambda^(j-1) in HP and grouped by value.
/// Sorted by position.
std::vector<BruteClass> brute_classes(const multifrac::EqualRatioIFS& ifs, int k, bool keep_words = false);

/// Convex hull of the attractor in HP.
std::pair<HP, HP> hull(const multifrac::EqualRatioIFS& ifs);

/// Dyadic convention: smallest n' with lambda^n' diam <= 2^-n.
int dyadic_word_length(const multifrac::EqualRatioIFS& ifs, int n);

/// O(classes^2) maximum window counts over the distinct positions `pos` of level-`len` maps.
std::uint64_t brute_t_dyadic(const multifrac::EqualRatioIFS& ifs, const std::vector<HP>& pos, int len, int n);
std::uint64_t brute_t_ball(const multifrac::EqualRatioIFS& ifs, const std::vector<HP>& pos, int n);

/// Cantor function F (distribution of the middle-third Cantor measure) at a rational point,
/// evaluated from its ternary expansion to `digits` digits (exact when the expansion stops).
multifrac::Rational cantor_cdf(const multifrac::Rational& x, int digits = 80);

}  // namespace oracle
