#pragma once

#include "multifrac/measure.hpp"

#include <string>
#include <vector>

namespace multifrac {

struct SpectrumSample {
  double q;
  double tau_hat;
};

struct SpectrumCurve {
  std::vector<SpectrumSample> samples;  // strictly increasing q
  int depth = 0;
  int m = 0;
  std::string method;
  std::string digest;
  /// Concavity violations beyond the tolerance; finite-size effects, never fatal.
  std::vector<std::string> warnings;
};

struct LegendreSample {
  double alpha;
  double tau_star;
};

struct LegendreCurve {
  std::vector<LegendreSample> samples;  // increasing alpha
  double alpha_min = 0.0;
  double alpha_max = 0.0;
  std::vector<SpectrumSample> hull;  // vertices of the upper concave hull used
};

struct SpectrumOptions {
  ProductOptions product;
  double tol_concave = 1e-3;
};

/// log(sum_Q mass(Q)^q) / (-m log 2) evaluated in 40-digit arithmetic from the exact masses.
/// Exactly 0 at q = 1 (the masses are checked to sum to 1).
double tau_from_masses(const BoxMasses& masses, double q);

/// tau_m(q) with masses from the depth-for-scale discretisation.
double tau_hat(const EqualRatioIFS& ifs, double q, int m, const SpectrumOptions& opts = {});

/// Throws DomainError unless the grid is strictly increasing with every q > 0.
void validate_q_grid(const std::vector<double>& grid);

SpectrumCurve tau_curve(const EqualRatioIFS& ifs, const std::vector<double>& q_grid, int m,
                        const SpectrumOptions& opts = {});
SpectrumCurve tau_curve(const BoxMasses& masses, const std::vector<double>& q_grid, double tol_concave = 1e-3);

/// Appends a warning for every triple whose slope increases by more than `tol`.
void check_concavity(SpectrumCurve& curve, double tol);

/// tau'(q) for q in [q_first, q_last). Grid points with equal spacing on both sides use a central
/// difference plus one Richardson step (when the doubled step fits); other interior points use the
/// derivative of the quadratic through the nearest three samples; q_first uses a right difference.
double derivative_estimate(const SpectrumCurve& curve, double q);

/// Chord slope tau_hat(q_max) / q_max, the tau'(+infinity) proxy.
double tau_prime_infinity_proxy(const SpectrumCurve& curve);

/// Upper concave hull of the samples (collinear interior points dropped).
std::vector<SpectrumSample> upper_concave_hull(const std::vector<SpectrumSample>& samples);

/// tau*(alpha) = min_q (alpha q - tau(q)) over the hull vertices, sampled at every hull edge slope;
/// alpha ranges over [last edge slope, first edge slope]. Needs >= 3 samples.
LegendreCurve legendre(const SpectrumCurve& curve);

/// Reads a Legendre curve back as (alpha, tau*) samples so it can be conjugated again.
SpectrumCurve as_curve(const LegendreCurve& curve);

struct TauInfinityBound {
  double value = 0.0;  // upward-rounded log(w)/(k log lambda)
  int k = 0;           // level attaining the minimum
  Rational max_weight;
  bool below_one = false;  // certified max_weight > lambda^k
};

/// min over 1 <= k <= k_max of log(max class weight at level k) / (k log lambda).
TauInfinityBound tau_prime_infty_upper_bound(const EqualRatioIFS& ifs, int k_max, const EnumerationOptions& opts = {});

/// True iff the images S_i(hull K) cover hull K, decided exactly.
bool dim_attractor_is_full(const EqualRatioIFS& ifs);

struct PackingResult {
  std::size_t balls = 0;
  double value = 0.0;
};

/// Greedy packing of closed r-balls centred at atoms, left to right; a new centre must lie beyond
/// x + 2r so the balls stay disjoint. Returns sum mass(B_r(x_i))^q, a heuristic lower bound only.
PackingResult packing_sum(const AtomMeasure& measure, double q, const Rational& r);

struct Prop5Report {
  Rational f_at_one;
  double f_15_squared = 0.0;
  double weighted_geometric_mean = 0.0;
  bool ratio_increasing = false;  // log f(q)/(q-1) on q = 1.01, 1.02, ..., 2
  double lambda_local = 0.342;
  double local_dim_lo = 0.0;  // d/dq [log f(q)/log lambda] at q = 2
  double local_dim_hi = 0.0;  // ... at q = 1.5
  Rational lambda_transversal;  // 0.3438
  bool transversality = false;  // lambda (sqrt 3 + 1) < 1, exact
};

/// f(q) = (1/4)^q + (5/12)^q + (1/3)^q and the quantities derived from it.
Prop5Report prop5_casestudy();

}  // namespace multifrac
