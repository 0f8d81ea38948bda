#pragma once

#include "multifrac/ifs.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace multifrac {

enum class WindowConvention {
  dyadic_box,     // half-open dyadic cells of side 2^-n against images of words of the matching length
  centered_ball,  // windows [x - lambda^n, x + lambda^n] against images of words of length n
};

std::string to_string(WindowConvention c);
WindowConvention parse_convention(const std::string& text);

/// Word length whose images are compared at scale n: for dyadic cells the smallest n' with
/// lambda^n' diam(K) <= 2^-n (decided exactly), for centred balls n itself.
int awsc_word_length(const EqualRatioIFS& ifs, int n, WindowConvention convention);

/// Maximum over windows of the number of distinct maps S_u (|u| = table.level()) whose image of
/// the attractor hull meets the window. Image intervals are closed, so tangency counts.
std::uint64_t t_n_count(const EqualRatioIFS& ifs, const ClassTable& table, int n, WindowConvention convention);
std::uint64_t t_n_count(const EqualRatioIFS& ifs, int n, WindowConvention convention,
                        const EnumerationOptions& opts = {});

struct AwscRow {
  int n;
  std::uint64_t t_n;
  double log2_tn_over_n;  // 0 when n = 0
};

struct AwscProfile {
  WindowConvention convention = WindowConvention::dyadic_box;
  std::vector<AwscRow> rows;
};

using ClassSource = std::function<ClassTable(int level)>;

/// Rows for n = n_lo..n_hi (empty when n_lo > n_hi). `source` supplies class tables, e.g. from a cache.
AwscProfile awsc_profile(const EqualRatioIFS& ifs, int n_lo, int n_hi, WindowConvention convention,
                         const ClassSource& source);
AwscProfile awsc_profile(const EqualRatioIFS& ifs, int n_lo, int n_hi, WindowConvention convention,
                         const EnumerationOptions& opts = {});

/// Regression hook: true when the last row has log2(t_n)/n <= bound (vacuously true when empty).
bool profile_within(const AwscProfile& profile, double bound);

struct YSetGap {
  Interval gap;          // enclosure of the minimal positive distance
  std::vector<long> witness;  // coordinates (in the beta-power basis) of the minimising difference
  std::size_t elements = 0;   // distinct elements of the truncated set
};

/// Minimal positive distance in {sum_{i<=cap} e_i beta^i : e_i in {0, +-1, ..., +-m}}, beta > 1 an
/// algebraic integer (monic minimal polynomial). Throws ResourceError past `budget` elements.
YSetGap yset_min_gap(const AlgebraicNumber& beta, int m, int degree_cap, std::uint64_t budget = 50'000'000,
                     const Rational& width = pow2(-60));

}  // namespace multifrac
