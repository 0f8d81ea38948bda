#include "cli.hpp"

#include "report.hpp"

#include "multifrac/atom_cache.hpp"
#include "multifrac/errors.hpp"
#include "multifrac/moran.hpp"
#include "multifrac/systems.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace multifrac::cli {

namespace {

struct Config {
  std::string ifs_path;
  int k = -1;
  int n = 4;
  int m = -1;
  std::string q_grid = "0.5:4:0.25";
  std::string precision = "1e-12";
  std::string format = "csv";
  std::string cache;
  unsigned threads = 1;
  std::uint64_t budget = 100'000'000;
  int digits = 10;
  std::string word;
  bool heavy = false;
  std::string range = "1:8";
  std::string convention = "dyadic";
  std::string only;
  std::string schedule;
  long ell_max = 100;
  std::string rates;
  std::string rates2;
  std::string p;
  std::string branches;
  std::string ratios;
  std::string beta = "salem:4";
  int ym = 1;
  int cap = 6;
};

std::filesystem::path cache_dir(const Config& c) {
  if (!c.cache.empty()) return c.cache;
  if (const char* env = std::getenv("MULTIFRAC_CACHE_DIR"); env && *env) return env;
  return {};
}

EnumerationOptions enumeration(const Config& c) {
  EnumerationOptions o;
  o.entry_budget = c.budget;
  return o;
}

EqualRatioIFS require_ifs(const Config& c) {
  if (c.ifs_path.empty()) throw DomainError("--ifs is required");
  return load_ifs(c.ifs_path);
}

std::string num(double x, int digits) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  if (parts.size() != 3) throw DomainError("--q-grid expects LO:HI:STEP");
  const Rational lo = parse_rational(parts[0]);
  const Rational hi = parse_rational(parts[1]);
  const Rational step = parse_rational(parts[2]);
  if (sgn(step) <= 0) throw DomainError("--q-grid step must be positive");
  std::vector<double> grid;
  for (Rational q = lo; q <= hi; q += step) {
    grid.push_back(q.get_d());
    if (grid.size() > 100000) throw DomainError("--q-grid has too many points");
  }
  validate_q_grid(grid);
  return grid;
}

std::pair<int, int> parse_range(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw DomainError("--range expects LO:HI");
  try {
    return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw DomainError("--range expects integers LO:HI");
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  for (const auto& s : split_list(text)) out.push_back(parse_rational(s).get_d());
  return out;
}

std::string coords_string(const Coords& c) {
  std::string s;
  for (const auto& x : c) s += (s.empty() ? "" : " ") + x.get_str();
  return s;
}

void emit_json(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

int cmd_salem(const Config& c, std::ostream& out) {
  const IntPoly q = salem_polynomial(c.n);
  const Rational width = parse_rational(c.precision);
  if (sgn(width) <= 0) throw DomainError("--precision must be positive");
  const AlgebraicNumber beta = salem_root(c.n).refine(width);
  const AlgebraicNumber lambda = salem_ratio(c.n).refine(width);
  const int digits = digits_for_width(width) + 2;
  auto enclosure = [&](const AlgebraicNumber& a) {
    return "[" + decimal_down(a.enclosure().lo, digits) + ", " + decimal_up(a.enclosure().hi, digits) + "]";
  };
  std::vector<std::string> coeffs;
  for (const auto& x : q.coeffs()) coeffs.push_back(x.get_str());
  if (c.format == "json") {
    auto interval = [&](const AlgebraicNumber& a) {
      return json{{"lo", decimal_down(a.enclosure().lo, digits)},
                  {"hi", decimal_up(a.enclosure().hi, digits)},
                  {"lo_exact", a.enclosure().lo.get_str()},
                  {"hi_exact", a.enclosure().hi.get_str()}};
    };
    emit_json(out, {{"n", c.n}, {"coefficients", coeffs}, {"beta", interval(beta)}, {"lambda", interval(lambda)}});
    return kOk;
  }
  std::string poly;
  for (const auto& s : coeffs) poly += (poly.empty() ? "" : " ") + s;
  out << "quantity,value\n";
  out << "coefficients," << poly << "\n";
  out << "beta,\"" << enclosure(beta) << "\"\n";
  out << "lambda,\"" << enclosure(lambda) << "\"\n";
  return kOk;
}

int cmd_verify(const Config& c, std::ostream& out) {
  const auto results = run_checks(c.only, cache_dir(c));
  bool all = true;
  for (const auto& r : results) all = all && r.passed;
  if (c.format == "json") {
    json checks = json::array();
    for (const auto& r : results) checks.push_back(to_json(r));
    emit_json(out, {{"passed", all}, {"checks", checks}, {"version", kToolVersion}});
  } else {
    out << "check,status,detail\n";
    for (const auto& r : results) {
      out << r.name << "," << (r.passed ? "PASS" : "FAIL") << ",\"" << r.detail << "\"\n";
    }
  }
  return all ? kOk : kVerificationFailure;
}

SpectrumCurve compute_curve(const Config& c, std::ostream& err) {
  if (c.m < 0) throw DomainError("--m is required");
  const EqualRatioIFS ifs = require_ifs(c);
  SpectrumOptions opts;
  opts.product.threads = c.threads;
  opts.product.enumeration = enumeration(c);
  SpectrumCurve curve = tau_curve(ifs, parse_grid(c.q_grid), c.m, opts);
  for (const auto& w : curve.warnings) err << "warning: " << w << "\n";
  return curve;
}

int cmd_spectrum(const Config& c, std::ostream& out, std::ostream& err) {
  const SpectrumCurve curve = compute_curve(c, err);
  if (c.format == "json") {
    json j = to_json(curve);
    j["tau_prime_infinity_proxy"] = tau_prime_infinity_proxy(curve);
    emit_json(out, j);
    return kOk;
  }
  out << "q,tau_hat\n";
  for (const auto& s : curve.samples) out << num(s.q, c.digits) << "," << num(s.tau_hat, c.digits) << "\n";
  return kOk;
}

int cmd_legendre(const Config& c, std::ostream& out, std::ostream& err) {
  const SpectrumCurve curve = compute_curve(c, err);
  const LegendreCurve leg = legendre(curve);
  if (c.format == "json") {
    json j = to_json(leg);
    j["metadata"] = to_json(Metadata{curve.digest, curve.m, curve.depth, "legendre-hull", kToolVersion});
    emit_json(out, j);
    return kOk;
  }
  out << "alpha,tau_star\n";
  for (const auto& s : leg.samples) out << num(s.alpha, c.digits) << "," << num(s.tau_star, c.digits) << "\n";
  return kOk;
}

int cmd_classes(const Config& c, std::ostream& out, std::ostream& err) {
  if (c.k < 0) throw DomainError("--k is required");
  const EqualRatioIFS ifs = require_ifs(c);
  CacheOutcome outcome;
  const ClassTable table = cached_classes(ifs, c.k, cache_dir(c), enumeration(c), &outcome);
  if (outcome.rejected) err << "warning: cache rejected (" << outcome.reason << "), recomputed\n";
  if (!c.word.empty()) {
    const Word w = parse_word(c.word);
    if (static_cast<int>(w.size()) != c.k) throw DomainError("--word length differs from --k");
    const Coords target = compose_word(ifs, w).translation;
    std::vector<std::string> members;
    for (const auto& m : class_members(ifs, c.k, target, enumeration(c))) members.push_back(word_to_string(m));
    if (c.format == "json") {
      emit_json(out, {{"k", c.k}, {"word", c.word}, {"translation", coords_string(target)},
                      {"multiplicity", members.size()}, {"members", members}});
    } else {
      out << "word\n";
      for (const auto& m : members) out << m << "\n";
    }
    return kOk;
  }
  if (c.heavy) {
    const HeavyClass h = find_heavy_class(ifs, table);
    if (c.format == "json") {
      emit_json(out, {{"k", c.k}, {"translation", coords_string(h.translation)},
                      {"multiplicity", h.multiplicity.get_str()}, {"weight", h.weight.get_str()},
                      {"exceeds_contraction", h.exceeds_contraction}});
    } else {
      out << "translation,multiplicity,weight,exceeds_contraction\n";
      out << coords_string(h.translation) << "," << h.multiplicity.get_str() << "," << h.weight.get_str() << ","
          << (h.exceeds_contraction ? "true" : "false") << "\n";
    }
    return kOk;
  }
  if (c.format == "json") {
    json entries = json::array();
    for (const auto& e : table.entries()) {
      entries.push_back({{"translation", coords_string(e.translation)},
                         {"multiplicity", e.multiplicity.get_str()},
                         {"weight", e.weight.get_str()}});
    }
    emit_json(out, {{"metadata", to_json(Metadata{ifs.digest(), 0, c.k, "classes", kToolVersion})},
                    {"classes", entries}});
    return kOk;
  }
  out << "translation,multiplicity,weight\n";
  for (const auto& e : table.entries()) {
    out << coords_string(e.translation) << "," << e.multiplicity.get_str() << "," << e.weight.get_str() << "\n";
  }
  return kOk;
}

int cmd_awsc(const Config& c, std::ostream& out) {
  const EqualRatioIFS ifs = require_ifs(c);
  const auto [lo, hi] = parse_range(c.range);
  const WindowConvention conv = parse_convention(c.convention);
  const auto dir = cache_dir(c);
  const EnumerationOptions opts = enumeration(c);
  const AwscProfile profile =
      awsc_profile(ifs, lo, hi, conv, [&](int level) { return cached_classes(ifs, level, dir, opts); });
  if (c.format == "json") {
    json j = to_json(profile);
    j["metadata"] = to_json(Metadata{ifs.digest(), 0, hi, "awsc-" + to_string(conv), kToolVersion});
    emit_json(out, j);
    return kOk;
  }
  out << "n,t_n,log2tn_over_n,convention\n";
  for (const auto& r : profile.rows) {
    out << r.n << "," << r.t_n << "," << num(r.log2_tn_over_n, c.digits) << "," << to_string(conv) << "\n";
  }
  return kOk;
}

AlgebraicNumber parse_beta(const std::string& text) {
  if (text == "golden") {
    return AlgebraicNumber::isolated(IntPoly{-1, -1, 1}, Interval(Rational(3, 2), Rational(2)));
  }
  if (text.rfind("salem:", 0) == 0) {
    const Rational n = parse_rational(text.substr(6));
    if (n.get_den() != 1 || !n.get_num().fits_sint_p()) throw DomainError("salem:N needs an integer N");
    return salem_root(static_cast<int>(n.get_num().get_si()));
  }
  const Rational r = parse_rational(text);
  if (r.get_den() != 1) throw DomainError("--beta must be golden, salem:N, or an integer");
  return AlgebraicNumber::from_rational(r);
}

int cmd_ygap(const Config& c, std::ostream& out) {
  const YSetGap g = yset_min_gap(parse_beta(c.beta), c.ym, c.cap, c.budget);
  const int digits = 15;
  const std::string enc = "[" + decimal_down(g.gap.lo, digits) + "," + decimal_up(g.gap.hi, digits) + "]";
  if (c.format == "json") {
    emit_json(out, {{"beta", c.beta}, {"m", c.ym}, {"degree_cap", c.cap}, {"elements", g.elements}, {"gap", enc},
                    {"witness", g.witness}});
    return kOk;
  }
  out << "beta,m,degree_cap,elements,gap\n";
  out << c.beta << "," << c.ym << "," << c.cap << "," << g.elements << ",\"" << enc << "\"\n";
  return kOk;
}

int cmd_moran(const Config& c, std::ostream& out, std::ostream& err) {
  if (!c.branches.empty() || !c.ratios.empty()) {
    // Periodic uniform Moran construction from the given lists.
    const auto b = split_list(c.branches);
    const auto r = split_list(c.ratios);
    if (b.empty() || r.empty()) throw DomainError("--branches and --ratios must both be given");
    if (c.ell_max < 1) throw DomainError("--ell-max must be positive");
    MoranParams params;
    for (long l = 0; l < c.ell_max; ++l) {
      const Rational nb = parse_rational(b[static_cast<std::size_t>(l) % b.size()]);
      if (nb.get_den() != 1) throw DomainError("branch counts must be integers");
      params.branches.push_back(nb.get_num());
      params.ratios.push_back(parse_rational(r[static_cast<std::size_t>(l) % r.size()]));
    }
    const MoranResult res = moran_dimension(params, static_cast<std::size_t>(c.ell_max));
    for (const auto& w : res.warnings) err << "warning: " << w << "\n";
    if (c.format == "json") {
      emit_json(out, {{"s", res.s}, {"tail_inf", res.tail_inf}, {"liminf_estimate", res.liminf_estimate}});
      return kOk;
    }
    out << "ell,s_ell,tail_inf\n";
    for (std::size_t i = 0; i < res.s.size(); ++i) {
      out << i + 1 << "," << num(res.s[i], c.digits) << "," << num(res.tail_inf[i], c.digits) << "\n";
    }
    return kOk;
  }
  if (c.schedule.empty()) throw DomainError("--schedule or --branches/--ratios is required");
  std::ifstream in(c.schedule);
  if (!in) throw DomainError("cannot read " + c.schedule);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::vector<long> L = parse_schedule(buf.str());
  ScheduleRates rates;
  const bool with_rates = !c.rates.empty();
  if (with_rates) {
    rates.first = parse_doubles(c.rates);
    if (!c.rates2.empty()) rates.second = parse_doubles(c.rates2);
    if (!c.p.empty()) rates.p = parse_rational(c.p);
  } else if (!c.rates2.empty() || !c.p.empty()) {
    throw DomainError("--rates2 and --p need --rates");
  }
  const Theorem21Schedule s = schedule_from_L(L, c.ell_max, with_rates ? &rates : nullptr);
  check_schedule(s);
  if (c.format == "json") {
    json rows = json::array();
    for (const auto& r : s.rows) {
      json row = {{"ell", r.ell}, {"theta", r.theta}, {"n_ell", r.n.get_str()}};
      if (r.s) row["s_ell"] = *r.s;
      if (r.target) row["target"] = r.target;
      rows.push_back(row);
    }
    const ScheduleReport rep = schedule_limits_report(s, 0.25);
    emit_json(out, {{"rows", rows},
                    {"tail", {{"n_over_prefix", rep.n_over_prefix},
                              {"n_over_prev", rep.n_over_prev},
                              {"theta_ratio", rep.theta_ratio},
                              {"tail_asserted", rep.tail_asserted}}}});
    return kOk;
  }
  out << "ell,theta,n_ell,s_ell\n";
  for (const auto& r : s.rows) {
    out << r.ell << "," << r.theta << "," << r.n.get_str() << "," << (r.s ? num(*r.s, c.digits) : "") << "\n";
  }
  return kOk;
}

int cmd_casestudy(const Config& c, std::ostream& out) {
  const Prop5Report p = prop5_casestudy();
  if (c.format == "json") {
    emit_json(out, {{"f_at_one", p.f_at_one.get_str()},
                    {"f_1_5_squared", p.f_15_squared},
                    {"weighted_geometric_mean", p.weighted_geometric_mean},
                    {"ratio_increasing", p.ratio_increasing},
                    {"lambda_local", p.lambda_local},
                    {"local_dimension_interval", {p.local_dim_lo, p.local_dim_hi}},
                    {"lambda_transversal", p.lambda_transversal.get_str()},
                    {"transversality", p.transversality}});
    return kOk;
  }
  out << "quantity,value\n";
  out << "f(1)," << p.f_at_one.get_str() << "\n";
  out << "f(1.5)^2," << num(p.f_15_squared, 6) << "\n";
  out << "weighted_geometric_mean," << num(p.weighted_geometric_mean, 6) << "\n";
  out << "log_f_over_q_minus_1_increasing," << (p.ratio_increasing ? "true" : "false") << "\n";
  out << "local_dimension_interval_lambda_0.342,\"(" << num(p.local_dim_lo, 6) << ", " << num(p.local_dim_hi, 6)
      << ")\"\n";
  out << "lambda(sqrt3+1)<1_at_0.3438," << (p.transversality ? "true" : "false") << "\n";
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multifractal analysis of equal-ratio self-similar measures", "multifrac"};
  app.require_subcommand(1);
  Config c;

  auto fmt = [&](CLI::App* s) {
    s->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto system = [&](CLI::App* s) {
    s->add_option("--ifs", c.ifs_path, "IFS description file")->required();
    s->add_option("--budget", c.budget, "class-table entry budget");
    s->add_option("--digits", c.digits, "significant digits in CSV output")->check(CLI::Range(1, 17));
  };
  auto cache = [&](CLI::App* s) {
    s->add_option("--cache", c.cache, "cache directory (default $MULTIFRAC_CACHE_DIR)");
  };

  auto* salem = app.add_subcommand("salem", "Salem polynomial and certified enclosures of beta_n, 1/beta_n");
  salem->add_option("--n", c.n, "degree (>= 4)")->required();
  salem->add_option("--precision", c.precision, "enclosure width, rational or decimal");
  fmt(salem);

  auto* verify = app.add_subcommand("verify-paper", "Run the reproduction checks");
  verify->add_option("--only", c.only, "run a single check")->check(CLI::IsMember(check_names()));
  fmt(verify);
  cache(verify);

  auto* spectrum = app.add_subcommand("spectrum", "Estimate tau(q) from dyadic box masses");
  auto* leg = app.add_subcommand("legendre", "Legendre transform of the estimated spectrum");
  for (auto* s : {spectrum, leg}) {
    system(s);
    s->add_option("--m", c.m, "dyadic level")->required()->check(CLI::Range(0, 40));
    s->add_option("--q-grid", c.q_grid, "LO:HI:STEP, all q > 0");
    s->add_option("--threads", c.threads, "worker threads")->check(CLI::Range(1u, 256u));
    fmt(s);
  }

  auto* classes = app.add_subcommand("classes", "Word equivalence classes at level k");
  system(classes);
  classes->add_option("--k", c.k, "word length")->required()->check(CLI::Range(0, 64));
  classes->add_option("--word", c.word, "list the members of this word's class");
  classes->add_flag("--heavy", c.heavy, "report the class of maximal multiplicity");
  fmt(classes);
  cache(classes);

  auto* awsc = app.add_subcommand("awsc", "Window counts t_n");
  system(awsc);
  awsc->add_option("--range", c.range, "LO:HI scales (empty when LO > HI)");
  awsc->add_option("--convention", c.convention, "dyadic or ball")->check(CLI::IsMember({"dyadic", "ball"}));
  fmt(awsc);
  cache(awsc);

  auto* ygap = app.add_subcommand("ygap", "Minimal gap of truncated signed-digit sets in base beta");
  ygap->add_option("--beta", c.beta, "golden, salem:N, or an integer");
  ygap->add_option("--m", c.ym, "digit bound")->check(CLI::Range(1, 100));
  ygap->add_option("--degree-cap", c.cap, "highest power")->check(CLI::Range(0, 40));
  ygap->add_option("--budget", c.budget, "element budget");
  fmt(ygap);

  auto* moran = app.add_subcommand("moran", "Moran dimensions and schedule simulation");
  moran->add_option("--schedule", c.schedule, "file with an 'L: 0 L1 L2 ...' line");
  moran->add_option("--ell-max", c.ell_max, "number of levels");
  moran->add_option("--rates", c.rates, "comma-separated rates indexed by theta");
  moran->add_option("--rates2", c.rates2, "second rate table for the mixed schedule");
  moran->add_option("--p", c.p, "mixing threshold for {l sqrt 2}");
  moran->add_option("--branches", c.branches, "comma-separated N_l, repeated periodically");
  moran->add_option("--ratios", c.ratios, "comma-separated r_l, repeated periodically");
  moran->add_option("--digits", c.digits, "significant digits")->check(CLI::Range(1, 17));
  fmt(moran);

  auto* casestudy = app.add_subcommand("casestudy", "Evaluate the three-map closed-form example");
  fmt(casestudy);

  std::vector<std::string> argv_store;
  argv_store.push_back("multifrac");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*salem) return cmd_salem(c, out);
    if (*verify) return cmd_verify(c, out);
    if (*spectrum) return cmd_spectrum(c, out, err);
    if (*leg) return cmd_legendre(c, out, err);
    if (*classes) return cmd_classes(c, out, err);
    if (*awsc) return cmd_awsc(c, out);
    if (*ygap) return cmd_ygap(c, out);
    if (*moran) return cmd_moran(c, out, err);
    if (*casestudy) return cmd_casestudy(c, out);
  } catch (const ResourceError& e) {
    err << "resource budget exceeded: " << e.what() << " (level reached " << e.level_reached() << ")\n";
    return kResourceBudget;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "unexpected error: " << e.what() << "\n";
    return kUnexpected;
  }
  return kUnexpected;
}

}  // namespace multifrac::cli
