#include "cli.hpp"
#include "report.hpp"

#include "multifrac/spectrum.hpp"
#include "multifrac/systems.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

using namespace multifrac;
using multifrac::cli::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(MULTIFRAC_DATA_DIR) + "/" + name; }

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

fs::path scratch_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("multifrac-cli-" + name + "-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(CliSalem, EnclosuresAndErrors) {
  auto r = run({"salem", "--n", "4", "--format", "json"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  auto j = json::parse(r.out);
  Rational lo(j["beta"]["lo_exact"].get<std::string>());
  Rational hi(j["beta"]["hi_exact"].get<std::string>());
  lo.canonicalize();
  hi.canonicalize();
  EXPECT_GE(lo, parse_rational("1.722083"));
  EXPECT_LE(hi, parse_rational("1.722084"));

  auto csv = run({"salem", "--n", "4"});
  EXPECT_EQ(csv.code, cli::kOk);
  EXPECT_EQ(lines(csv.out).front(), "quantity,value");

  EXPECT_EQ(run({"salem", "--n", "3"}).code, cli::kConfigError);

  auto fine = run({"salem", "--n", "10", "--precision", "1e-30", "--format", "json"});
  ASSERT_EQ(fine.code, cli::kOk);
  auto jf = json::parse(fine.out);
  for (const char* key : {"beta", "lambda"}) {
    Rational a(jf[key]["lo_exact"].get<std::string>()), b(jf[key]["hi_exact"].get<std::string>());
    a.canonicalize();
    b.canonicalize();
    EXPECT_LE(b - a, parse_rational("1e-30")) << key;
  }
}

TEST(CliConfig, RejectsUnknownAndInvalid) {
  EXPECT_EQ(run({"salem", "--n", "4", "--bogus", "1"}).code, cli::kConfigError);
  EXPECT_EQ(run({"nosuch"}).code, cli::kConfigError);
  EXPECT_EQ(run({"spectrum", "--ifs", data("cantor.ifs"), "--m", "8", "--q-grid", "-1:2:0.5"}).code,
            cli::kConfigError);
  EXPECT_EQ(run({"spectrum", "--ifs", "/nonexistent.ifs", "--m", "8"}).code, cli::kConfigError);
  EXPECT_EQ(run({"awsc", "--ifs", data("cantor.ifs"), "--range", "1:2", "--convention", "hex"}).code,
            cli::kConfigError);
  EXPECT_EQ(run({"spectrum", "--ifs", data("cantor.ifs"), "--m", "8", "--format", "xml"}).code, cli::kConfigError);
}

TEST(CliBudget, ResourceErrorsExitThree) {
  EXPECT_EQ(run({"classes", "--ifs", data("bernoulli_salem4.ifs"), "--k", "15", "--budget", "50"}).code,
            cli::kResourceBudget);
  EXPECT_EQ(run({"ygap", "--beta", "salem:4", "--m", "3", "--degree-cap", "12", "--budget", "1000"}).code,
            cli::kResourceBudget);
}

TEST(CliClasses, LevelFifteenClassListing) {
  auto r = run({"classes", "--ifs", data("bernoulli_salem4.ifs"), "--k", "15", "--word", "122211121112221"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  auto l = lines(r.out);
  ASSERT_EQ(l.size(), 11u);
  EXPECT_EQ(l[0], "word");
  std::vector<std::string> words(l.begin() + 1, l.end());
  EXPECT_EQ(words, cli::table1_words());

  auto heavy = run({"classes", "--ifs", data("bernoulli_salem4.ifs"), "--k", "15", "--heavy", "--format", "json"});
  ASSERT_EQ(heavy.code, cli::kOk);
  auto j = json::parse(heavy.out);
  EXPECT_EQ(j["multiplicity"], "10");
  EXPECT_EQ(j["exceeds_contraction"], true);
}

TEST(CliSpectrum, CantorCsvAgreesWithLibrary) {
  auto r = run({"spectrum", "--ifs", data("cantor.ifs"), "--m", "12", "--q-grid", "0.5:4:0.5", "--digits", "17"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  auto l = lines(r.out);
  ASSERT_EQ(l.front(), "q,tau_hat");
  ASSERT_EQ(l.size(), 9u);
  for (std::size_t i = 1; i < l.size(); ++i) {
    auto comma = l[i].find(',');
    double q = std::stod(l[i].substr(0, comma));
    double tau = std::stod(l[i].substr(comma + 1));
    EXPECT_DOUBLE_EQ(tau, tau_hat(systems::cantor(), q, 12));
    EXPECT_LE(std::abs(tau - (q - 1) * std::log(2.0) / std::log(3.0)), 2.0 / 12);
  }
}

TEST(CliSpectrum, JsonRoundTripAndDeterminism) {
  std::vector<std::string> args{"spectrum", "--ifs", data("bernoulli_golden.ifs"), "--m", "8", "--q-grid", "0.5:3:0.25",
                                "--format", "json"};
  auto a = run(args);
  auto b = run(args);
  ASSERT_EQ(a.code, cli::kOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  SpectrumCurve parsed = cli::spectrum_from_json(json::parse(a.out));
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(0.5 + 0.25 * i);
  SpectrumCurve direct = tau_curve(systems::bernoulli(systems::golden_context()), grid, 8);
  ASSERT_EQ(parsed.samples.size(), direct.samples.size());
  for (std::size_t i = 0; i < parsed.samples.size(); ++i) {
    EXPECT_EQ(parsed.samples[i].q, direct.samples[i].q);
    EXPECT_EQ(parsed.samples[i].tau_hat, direct.samples[i].tau_hat);
  }
  EXPECT_EQ(parsed.m, direct.m);
  EXPECT_EQ(parsed.depth, direct.depth);
  EXPECT_EQ(parsed.method, direct.method);
  EXPECT_EQ(parsed.digest, direct.digest);
  EXPECT_EQ(parsed.warnings, direct.warnings);

  auto leg = run({"legendre", "--ifs", data("bernoulli_golden.ifs"), "--m", "8", "--q-grid", "0.5:3:0.25",
                  "--format", "json"});
  ASSERT_EQ(leg.code, cli::kOk);
  LegendreCurve lp = cli::legendre_from_json(json::parse(leg.out));
  LegendreCurve ld = legendre(direct);
  ASSERT_EQ(lp.samples.size(), ld.samples.size());
  for (std::size_t i = 0; i < lp.samples.size(); ++i) {
    EXPECT_EQ(lp.samples[i].alpha, ld.samples[i].alpha);
    EXPECT_EQ(lp.samples[i].tau_star, ld.samples[i].tau_star);
  }
  EXPECT_EQ(lp.alpha_min, ld.alpha_min);
  EXPECT_EQ(lp.alpha_max, ld.alpha_max);
  EXPECT_EQ(lp.hull.size(), ld.hull.size());
}

TEST(CliReport, StructRoundTrips) {
  AwscProfile p;
  p.convention = WindowConvention::centered_ball;
  p.rows = {{2, 3, std::log2(3.0) / 2}, {3, 5, std::log2(5.0) / 3}};
  AwscProfile back = cli::awsc_from_json(cli::to_json(p));
  EXPECT_EQ(back.convention, p.convention);
  ASSERT_EQ(back.rows.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back.rows[i].n, p.rows[i].n);
    EXPECT_EQ(back.rows[i].t_n, p.rows[i].t_n);
    EXPECT_EQ(back.rows[i].log2_tn_over_n, p.rows[i].log2_tn_over_n);
  }
  cli::Metadata m{"abc", 12, 20, "dyadic-product", "9.9"};
  auto mb = cli::metadata_from_json(cli::to_json(m));
  EXPECT_EQ(mb.digest, m.digest);
  EXPECT_EQ(mb.m, m.m);
  EXPECT_EQ(mb.n, m.n);
  EXPECT_EQ(mb.method, m.method);
  EXPECT_EQ(mb.version, m.version);
}

TEST(CliAwsc, EmptyRangeIsHeaderOnly) {
  auto r = run({"awsc", "--ifs", data("cantor.ifs"), "--range", "5:4"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_EQ(r.out, "n,t_n,log2tn_over_n,convention\n");

  auto rows = run({"awsc", "--ifs", data("cantor.ifs"), "--range", "2:10", "--convention", "dyadic"});
  ASSERT_EQ(rows.code, cli::kOk);
  auto l = lines(rows.out);
  ASSERT_EQ(l.size(), 10u);
  for (std::size_t i = 1; i < l.size(); ++i) EXPECT_NE(l[i].find(",dyadic"), std::string::npos);
}

TEST(CliAwsc, ProfileIsCached) {
  auto dir = scratch_dir("awsc");
  auto first = run({"awsc", "--ifs", data("bernoulli_salem4.ifs"), "--range", "2:5", "--cache", dir.string()});
  ASSERT_EQ(first.code, cli::kOk) << first.err;
  EXPECT_FALSE(fs::is_empty(dir));
  auto second = run({"awsc", "--ifs", data("bernoulli_salem4.ifs"), "--range", "2:5", "--cache", dir.string()});
  EXPECT_EQ(first.out, second.out);
  fs::remove_all(dir);
}

TEST(CliVerify, AllChecksAndCorruptedCache) {
  auto dir = scratch_dir("verify");
  auto all = run({"verify-paper", "--cache", dir.string()});
  EXPECT_EQ(all.code, cli::kOk) << all.out << all.err;
  auto l = lines(all.out);
  ASSERT_EQ(l.size(), 1 + cli::check_names().size());
  for (std::size_t i = 1; i < l.size(); ++i) EXPECT_NE(l[i].find(",PASS,"), std::string::npos) << l[i];

  auto one = run({"verify-paper", "--only", "table1", "--cache", dir.string(), "--format", "json"});
  ASSERT_EQ(one.code, cli::kOk);
  auto j = json::parse(one.out);
  ASSERT_EQ(j["checks"].size(), 1u);
  EXPECT_NE(j["checks"][0]["detail"].get<std::string>().find("cache hit"), std::string::npos);

  // Corrupt every cached file: the check must reject, recompute, and still pass.
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::ofstream out(entry.path(), std::ios::app);
    out << "1 2 3 4 | 1 2 1\n";
  }
  auto again = run({"verify-paper", "--only", "table1", "--cache", dir.string(), "--format", "json"});
  EXPECT_EQ(again.code, cli::kOk);
  auto ja = json::parse(again.out);
  EXPECT_NE(ja["checks"][0]["detail"].get<std::string>().find("cache rejected"), std::string::npos);
  EXPECT_EQ(ja["passed"], true);
  fs::remove_all(dir);
}

TEST(CliCache, EnvironmentDefault) {
  auto dir = scratch_dir("env");
  ::setenv("MULTIFRAC_CACHE_DIR", dir.string().c_str(), 1);
  auto r = run({"classes", "--ifs", data("bernoulli_golden.ifs"), "--k", "6"});
  ::unsetenv("MULTIFRAC_CACHE_DIR");
  ASSERT_EQ(r.code, cli::kOk);
  EXPECT_FALSE(fs::is_empty(dir));
  auto l = lines(r.out);
  EXPECT_EQ(l.front(), "translation,multiplicity,weight");
  fs::remove_all(dir);
}

TEST(CliMoran, ScheduleAndDimension) {
  // theta reaches 8 by ell = 40, so eight rates are needed.
  auto s = run({"moran", "--schedule", data("schedule.txt"), "--ell-max", "40", "--rates",
                "0.5,0.5,0.5,0.5,0.5,0.5,0.5,0.5"});
  ASSERT_EQ(s.code, cli::kOk) << s.err;
  auto l = lines(s.out);
  EXPECT_EQ(l.front(), "ell,theta,n_ell,s_ell");
  EXPECT_EQ(l.size(), 41u);
  EXPECT_EQ(l.back().substr(0, 5), "40,8,");
  EXPECT_EQ(run({"moran", "--schedule", data("schedule.txt"), "--ell-max", "40", "--rates", "0.5"}).code,
            cli::kConfigError);

  auto d = run({"moran", "--branches", "2", "--ratios", "1/3", "--ell-max", "10", "--digits", "15"});
  ASSERT_EQ(d.code, cli::kOk) << d.err;
  auto dl = lines(d.out);
  EXPECT_EQ(dl.front(), "ell,s_ell,tail_inf");
  auto last = dl.back();
  auto c1 = last.find(',');
  double sv = std::stod(last.substr(c1 + 1, last.find(',', c1 + 1) - c1 - 1));
  EXPECT_NEAR(sv, std::log(2.0) / std::log(3.0), 1e-12);

  EXPECT_EQ(run({"moran", "--branches", "0", "--ratios", "1/3", "--ell-max", "3"}).code, cli::kConfigError);
}

TEST(CliMisc, CasestudyAndYgap) {
  auto c = run({"casestudy", "--format", "json"});
  ASSERT_EQ(c.code, cli::kOk) << c.err;
  auto j = json::parse(c.out);
  EXPECT_TRUE(j.is_object());

  auto y = run({"ygap", "--beta", "golden", "--m", "1", "--degree-cap", "6"});
  EXPECT_EQ(y.code, cli::kOk) << y.err;
  auto y2 = run({"ygap", "--beta", "golden", "--m", "1", "--degree-cap", "6"});
  EXPECT_EQ(y.out, y2.out);
}
