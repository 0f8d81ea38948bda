#pragma once

#include "multifrac/numeric.hpp"

#include <optional>
#include <string>
#include <vector>

namespace multifrac {

/// Uniform-per-level Moran construction: every level-l ball has N_l children, each scaled by r_l.
struct MoranParams {
  std::vector<BigInt> branches;   // N_1, N_2, ...
  std::vector<Rational> ratios;   // r_1, r_2, ... in (0, 1)
};

struct MoranResult {
  std::vector<double> s;         // s_l = log(N_1...N_l) / -log(r_1...r_l), l = 1..l_max
  std::vector<double> tail_inf;  // min_{l <= j <= l_max} s_j
  double liminf_estimate = 0.0;  // tail_inf at l_max / 2: evidence, not a limit
  std::vector<double> scale_ratio;  // log c_l / log M_l with c_l = r_l, M_l = r_1...r_l
  std::vector<std::string> warnings;
};

/// Throws DomainError for N_l = 0, r_l outside (0, 1), or l_max outside [1, levels].
MoranResult moran_dimension(const MoranParams& params, std::size_t l_max, double scale_ratio_warn = 0.25);

/// fractional part of l sqrt 2 below p, decided exactly (l sqrt 2 is irrational for l >= 1).
bool rotation_below(long l, const Rational& p);

/// Rates for N_l = max{1, [2^(n_l u_l)]}. With a single table u_l = rates[theta(l) - 1]; with a
/// second table and p, u_l comes from table t_l, t_l = 1 iff {l sqrt 2} < p.
struct ScheduleRates {
  std::vector<double> first;
  std::vector<double> second;
  std::optional<Rational> p;
};

struct ScheduleRow {
  long ell = 0;
  long theta = 0;
  BigInt n;
  BigInt prefix;               // n_1 + ... + n_(l-1)
  double n_over_prefix = 0.0;  // NaN at l = 1
  double n_over_prev = 0.0;    // NaN at l = 1
  int target = 0;              // t_l when mixing, else 0
  std::optional<double> log2_N;
  std::optional<double> s;     // sum log2 N_j / sum n_j
};

struct Theorem21Schedule {
  std::vector<long> L;  // L_0 = 0, L_1 >= 2, L_j >= 1
  std::vector<ScheduleRow> rows;
};

/// theta(l) is the j with L_0 + ... + L_(j-1) <= l < L_0 + ... + L_j; at l = sum(L) it is the
/// next index len(L), so l_max may not exceed sum(L). n_1 = L_1 and n_l = floor(prefix / theta) + 1.
Theorem21Schedule schedule_from_L(const std::vector<long>& L, long l_max, const ScheduleRates* rates = nullptr);

/// Throws DomainError unless theta is nondecreasing with unit steps and
/// n_l > prefix / theta(l) >= n_l - 1 on every row.
void check_schedule(const Theorem21Schedule& schedule);

struct ScheduleReport {
  double n_over_prefix = 0.0;
  double n_over_prev = 0.0;
  double theta_ratio = 0.0;  // theta(l_max) / theta(l_max - 1)
  bool tail_asserted = false;  // needs >= 10 rows and theta(l_max) >= 5
  bool theta_ratio_ok = true;
};

ScheduleReport schedule_limits_report(const Theorem21Schedule& schedule, double delta);

/// Parses "L: 0 2 3 5 ..." (comments with '#').
std::vector<long> parse_schedule(const std::string& text);

}  // namespace multifrac
