#include "multifrac/moran.hpp"

#include "multifrac/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace multifrac {

MoranResult moran_dimension(const MoranParams& params, std::size_t l_max, double scale_ratio_warn) {
  if (params.branches.size() != params.ratios.size()) throw DomainError("branch and ratio lists differ in length");
  if (l_max < 1 || l_max > params.branches.size()) {
    throw DomainError("l_max must lie in [1, " + std::to_string(params.branches.size()) + "]");
  }
  MoranResult out;
  HighFloat log_n = 0;
  HighFloat log_r = 0;
  for (std::size_t l = 0; l < l_max; ++l) {
    const BigInt& n = params.branches[l];
    const Rational& r = params.ratios[l];
    if (sgn(n) <= 0) throw DomainError("N_" + std::to_string(l + 1) + " must be at least 1");
    if (sgn(r) <= 0 || r >= 1) throw DomainError("r_" + std::to_string(l + 1) + " must lie in (0, 1)");
    log_n += log(to_high(Rational(n)));
    const HighFloat lr = log(to_high(r));
    log_r += lr;
    out.s.push_back(static_cast<double>(log_n / -log_r));
    out.scale_ratio.push_back(static_cast<double>(lr / log_r));
  }
  out.tail_inf.resize(out.s.size());
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = out.s.size(); i-- > 0;) {
    m = std::min(m, out.s[i]);
    out.tail_inf[i] = m;
  }
  out.liminf_estimate = out.tail_inf[(out.s.size() - 1) / 2];
  if (out.scale_ratio.back() > scale_ratio_warn) {
    std::ostringstream os;
    os << "log c_l / log M_l = " << out.scale_ratio.back() << " at l = " << l_max << " exceeds " << scale_ratio_warn;
    out.warnings.push_back(os.str());
  }
  return out;
}

bool rotation_below(long l, const Rational& p) {
  if (l < 1) throw DomainError("rotation index must be positive");
  if (sgn(p) <= 0) return false;
  if (p >= 1) return true;
  // k = floor(l sqrt 2); {l sqrt 2} < p  <=>  2 l^2 < (k + p)^2.
  BigInt two_l2 = BigInt(l) * l * 2;
  BigInt k;
  mpz_sqrt(k.get_mpz_t(), two_l2.get_mpz_t());
  Rational kp = Rational(k) + p;
  return Rational(two_l2) < kp * kp;
}

namespace {

double ratio(const BigInt& a, const BigInt& b) {
  if (b == 0) return std::numeric_limits<double>::quiet_NaN();
  Rational r(a, b);
  r.canonicalize();
  return static_cast<double>(to_high(r));
}

// log2 of max{1, floor(2^x)}.
double log2_branch(const HighFloat& x) {
  if (x < 1) return 0.0;
  if (x > 100) return static_cast<double>(x);
  const HighFloat v = floor(pow(HighFloat(2), x));
  return static_cast<double>(log(v) / log(HighFloat(2)));
}

}  // namespace

Theorem21Schedule schedule_from_L(const std::vector<long>& L, long l_max, const ScheduleRates* rates) {
  if (L.size() < 2) throw DomainError("schedule needs L_0 and L_1");
  if (L[0] != 0) throw DomainError("L_0 must be 0");
  if (L[1] < 2) throw DomainError("L_1 must be at least 2");
  for (std::size_t j = 2; j < L.size(); ++j) {
    if (L[j] < 1) throw DomainError("L_" + std::to_string(j) + " must be at least 1");
  }
  long total = 0;
  for (long x : L) total += x;
  if (l_max < 1 || l_max > total) throw DomainError("l_max must lie in [1, " + std::to_string(total) + "]");
  if (rates) {
    if (rates->second.empty() != !rates->p.has_value()) throw DomainError("mixing needs both a second rate table and p");
  }

  Theorem21Schedule out;
  out.L = L;
  long theta = 1;
  long boundary = L[0] + L[1];  // L_0 + ... + L_theta
  BigInt prefix = 0;
  BigInt prev = 0;
  HighFloat sum_log2n = 0;
  for (long l = 1; l <= l_max; ++l) {
    while (l >= boundary) {
      ++theta;
      boundary += static_cast<std::size_t>(theta) < L.size() ? L[static_cast<std::size_t>(theta)] : 0;
      if (static_cast<std::size_t>(theta) >= L.size()) break;
    }
    ScheduleRow row;
    row.ell = l;
    row.theta = theta;
    if (l == 1) {
      row.n = L[1];
    } else {
      BigInt q;
      mpz_fdiv_q(q.get_mpz_t(), prefix.get_mpz_t(), BigInt(theta).get_mpz_t());
      row.n = q + 1;
    }
    row.prefix = prefix;
    row.n_over_prefix = l == 1 ? std::numeric_limits<double>::quiet_NaN() : ratio(row.n, prefix);
    row.n_over_prev = l == 1 ? std::numeric_limits<double>::quiet_NaN() : ratio(row.n, prev);
    if (rates) {
      const std::vector<double>* table = &rates->first;
      if (rates->p) {
        row.target = rotation_below(l, *rates->p) ? 1 : 2;
        if (row.target == 2) table = &rates->second;
      }
      const auto idx = static_cast<std::size_t>(theta - 1);
      if (idx >= table->size()) throw DomainError("no rate supplied for theta = " + std::to_string(theta));
      const double lg = log2_branch(to_high(Rational(row.n)) * HighFloat((*table)[idx]));
      row.log2_N = lg;
      sum_log2n += HighFloat(lg);
      row.s = static_cast<double>(sum_log2n / to_high(Rational(prefix + row.n)));
    }
    prefix += row.n;
    prev = row.n;
    out.rows.push_back(std::move(row));
  }
  return out;
}

void check_schedule(const Theorem21Schedule& schedule) {
  const auto& rows = schedule.rows;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (sgn(r.n) <= 0) throw DomainError("n_l must be positive at l = " + std::to_string(r.ell));
    if (i > 0) {
      const long step = r.theta - rows[i - 1].theta;
      if (step < 0 || step > 1) throw DomainError("theta step " + std::to_string(step) + " at l = " + std::to_string(r.ell));
      // n > prefix / theta >= n - 1.
      const BigInt scaled = r.n * r.theta;
      if (!(scaled > r.prefix) || !(r.prefix >= (r.n - 1) * r.theta)) {
        throw DomainError("n_l is not the smallest integer above prefix/theta at l = " + std::to_string(r.ell));
      }
    } else if (r.theta != 1) {
      throw DomainError("theta(1) must be 1");
    }
  }
}

ScheduleReport schedule_limits_report(const Theorem21Schedule& schedule, double delta) {
  ScheduleReport rep;
  const auto& rows = schedule.rows;
  if (rows.empty()) return rep;
  rep.n_over_prefix = rows.back().n_over_prefix;
  rep.n_over_prev = rows.back().n_over_prev;
  rep.theta_ratio = rows.size() >= 2 ? static_cast<double>(rows.back().theta) / static_cast<double>(rows[rows.size() - 2].theta)
                                     : std::numeric_limits<double>::quiet_NaN();
  rep.tail_asserted = rows.size() >= 10 && rows.back().theta >= 5;
  if (rep.tail_asserted) rep.theta_ratio_ok = rep.theta_ratio >= 1 - delta && rep.theta_ratio <= 1 + delta;
  return rep;
}

std::vector<long> parse_schedule(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<long> L;
  bool seen = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    line = line.substr(first);
    if (line.rfind("L:", 0) != 0) throw ParseError("expected 'L:' line", lineno);
    if (seen) throw ParseError("duplicate 'L:' line", lineno);
    seen = true;
    std::istringstream vals(line.substr(2));
    std::string tok;
    while (vals >> tok) {
      try {
        std::size_t used = 0;
        long v = std::stol(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        L.push_back(v);
      } catch (const std::exception&) {
        throw ParseError("bad integer '" + tok + "'", lineno);
      }
    }
  }
  if (!seen) throw ParseError("missing 'L:' line", lineno);
  return L;
}

}  // namespace multifrac
