#include "multifrac/ifs.hpp"

#include "multifrac/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <unordered_map>

namespace multifrac {

Word parse_word(std::string_view digits) {
  Word w;
  for (char c : digits) {
    if (c < '1' || c > '9') throw ParseError("word letters must be digits 1-9: '" + std::string(digits) + "'");
    w.push_back(c - '0');
  }
  return w;
}

std::string word_to_string(const Word& w) {
  std::string s;
  bool wide = std::any_of(w.begin(), w.end(), [](int i) { return i > 9; });
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (wide && i > 0) s += ' ';
    s += std::to_string(w[i]);
  }
  return s;
}

EqualRatioIFS::EqualRatioIFS(ContextPtr ctx, std::vector<Coords> translations, std::vector<Rational> weights)
    : ctx_(std::move(ctx)), translations_(std::move(translations)), weights_(std::move(weights)) {
  if (translations_.size() < 2) throw DomainError("an IFS needs at least two maps");
  if (translations_.size() != weights_.size()) {
    throw DomainError("got " + std::to_string(translations_.size()) + " maps but " + std::to_string(weights_.size()) +
                      " weights");
  }
  Rational total = 0;
  for (const auto& w : weights_) {
    if (sgn(w) <= 0) throw DomainError("weights must be positive");
    total += w;
  }
  if (total != 1) throw DomainError("weights sum to " + total.get_str() + ", not 1");
  if (ctx_->lambda().compare(0) <= 0 || ctx_->lambda().compare(1) >= 0) {
    throw DomainError("contraction ratio must lie in (0, 1)");
  }
  for (const auto& t : translations_) {
    if (static_cast<int>(t.size()) != ctx_->dimension()) {
      throw DomainError("translation has " + std::to_string(t.size()) + " coordinates, expected " +
                        std::to_string(ctx_->dimension()));
    }
  }
  for (std::size_t i = 0; i < translations_.size(); ++i) {
    for (std::size_t j = i + 1; j < translations_.size(); ++j) {
      if (ctx_->sign(ctx_->sub(translations_[i], translations_[j])) == 0) {
        throw DomainError("translations " + std::to_string(i + 1) + " and " + std::to_string(j + 1) + " coincide");
      }
    }
  }
}

bool EqualRatioIFS::equal_weights() const {
  return std::all_of(weights_.begin(), weights_.end(), [&](const Rational& w) { return w == weights_.front(); });
}

BigInt EqualRatioIFS::weight_denominator() const {
  BigInt den = 1;
  for (const auto& w : weights_) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), w.get_den_mpz_t());
  return den;
}

std::pair<int, int> EqualRatioIFS::extreme_maps() const {
  int lo = 0;
  int hi = 0;
  for (int i = 1; i < size(); ++i) {
    if (ctx_->sign(ctx_->sub(translations_[static_cast<std::size_t>(i)], translations_[static_cast<std::size_t>(lo)])) < 0) lo = i;
    if (ctx_->sign(ctx_->sub(translations_[static_cast<std::size_t>(i)], translations_[static_cast<std::size_t>(hi)])) > 0) hi = i;
  }
  return {lo, hi};
}

std::string EqualRatioIFS::to_text() const {
  std::ostringstream out;
  if (ctx_->is_rational()) {
    out << "ratio: rational " << ctx_->lambda().enclosure().lo.get_str() << "\n";
  } else {
    out << "modulus:";
    for (const auto& c : ctx_->modulus().coeffs()) out << ' ' << c.get_str();
    const Interval& e = ctx_->lambda().enclosure();
    out << "\nratio: root in (" << e.lo.get_str() << "," << e.hi.get_str() << ")\n";
  }
  for (const auto& t : translations_) {
    out << "map:";
    for (const auto& c : t) out << ' ' << c.get_str();
    out << '\n';
  }
  for (const auto& w : weights_) out << "weight: " << w.get_str() << '\n';
  return out.str();
}

std::string EqualRatioIFS::digest() const {
  std::uint64_t h = 1469598103934665603ULL;
  // The lambda enclosure depends on refinement depth; hash the defining data instead.
  std::string text;
  if (ctx_->is_rational()) {
    text = "rational " + ctx_->lambda().enclosure().lo.get_str();
  } else {
    text = "modulus";
    for (const auto& c : ctx_->modulus().coeffs()) text += " " + c.get_str();
    text += " root " + decimal_down(ctx_->lambda().enclosure().lo, 30);
  }
  for (const auto& t : translations_) {
    text += "|map";
    for (const auto& c : t) text += " " + c.get_str();
  }
  for (const auto& w : weights_) text += "|w " + w.get_str();
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

EqualRatioIFS parse_ifs(std::string_view text) {
  std::optional<IntPoly> modulus;
  int modulus_line = 0;
  std::optional<Rational> rational_ratio;
  std::optional<std::pair<Rational, Rational>> root_window;
  int ratio_line = 0;
  std::vector<std::pair<std::vector<Rational>, int>> maps;
  std::vector<Rational> weights;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected 'key: value'", line_no);
    std::string key(trim(line.substr(0, colon)));
    std::string_view value = trim(line.substr(colon + 1));
    try {
      if (key == "modulus") {
        if (modulus) throw ParseError("duplicate modulus", line_no);
        std::vector<BigInt> c;
        for (const auto& tok : split_ws(value)) {
          Rational r = parse_rational(tok);
          if (r.get_den() != 1) throw ParseError("modulus coefficients must be integers", line_no);
          c.push_back(r.get_num());
        }
        modulus = IntPoly(std::move(c));
        modulus_line = line_no;
      } else if (key == "ratio") {
        if (rational_ratio || root_window) throw ParseError("duplicate ratio", line_no);
        ratio_line = line_no;
        auto toks = split_ws(value);
        if (toks.size() == 2 && toks[0] == "rational") {
          rational_ratio = parse_rational(toks[1]);
        } else if (toks.size() >= 3 && toks[0] == "root" && toks[1] == "in") {
          std::string rest;
          for (std::size_t i = 2; i < toks.size(); ++i) rest += toks[i];
          if (rest.size() < 5 || rest.front() != '(' || rest.back() != ')') {
            throw ParseError("expected 'root in (lo,hi)'", line_no);
          }
          auto comma = rest.find(',');
          if (comma == std::string::npos) throw ParseError("expected 'root in (lo,hi)'", line_no);
          root_window = std::make_pair(parse_rational(rest.substr(1, comma - 1)),
                                       parse_rational(rest.substr(comma + 1, rest.size() - comma - 2)));
        } else {
          throw ParseError("expected 'root in (lo,hi)' or 'rational p/q'", line_no);
        }
      } else if (key == "map") {
        std::vector<Rational> c;
        for (const auto& tok : split_ws(value)) c.push_back(parse_rational(tok));
        if (c.empty()) throw ParseError("empty map vector", line_no);
        maps.emplace_back(std::move(c), line_no);
      } else if (key == "weight") {
        auto toks = split_ws(value);
        if (toks.size() != 1) throw ParseError("expected one rational weight", line_no);
        weights.push_back(parse_rational(toks[0]));
      } else {
        throw ParseError("unknown key '" + key + "'", line_no);
      }
    } catch (const ParseError& e) {
      if (e.line() > 0) throw;
      throw ParseError(e.what(), line_no);
    }
  }

  if (!rational_ratio && !root_window) throw ParseError("missing 'ratio:' line");
  ContextPtr ctx;
  try {
    if (rational_ratio) {
      if (modulus) throw ParseError("'modulus:' is not used with a rational ratio", modulus_line);
      ctx = RingContext::rational(*rational_ratio);
    } else {
      if (!modulus) throw ParseError("'ratio: root in' needs a 'modulus:' line", ratio_line);
      if (!modulus->is_monic()) throw ParseError("modulus must be monic", modulus_line);
      const auto& [lo, hi] = *root_window;
      if (lo >= hi) throw ParseError("empty root window", ratio_line);
      std::vector<AlgebraicNumber> inside;
      for (const auto& r : real_roots(*modulus)) {
        AlgebraicNumber a = r;
        // Shrink until the enclosure is decided relative to the window.
        while (!a.is_rational() && ((a.enclosure().lo < lo && a.enclosure().hi > lo) ||
                                    (a.enclosure().lo < hi && a.enclosure().hi > hi))) {
          a = a.refine(a.enclosure().width() / 2);
        }
        if (a.compare(lo) > 0 && a.compare(hi) < 0) inside.push_back(a);
      }
      if (inside.size() != 1) {
        throw ParseError("modulus has " + std::to_string(inside.size()) + " roots in the ratio window", ratio_line);
      }
      ctx = RingContext::algebraic(*modulus, inside.front());
    }
  } catch (const DomainError& e) {
    throw ParseError(e.what(), ratio_line);
  }

  std::vector<Coords> translations;
  for (auto& [c, line] : maps) {
    if (static_cast<int>(c.size()) != ctx->dimension()) {
      throw ParseError("map has " + std::to_string(c.size()) + " coordinates, expected " +
                           std::to_string(ctx->dimension()),
                       line);
    }
    translations.push_back(std::move(c));
  }
  try {
    return EqualRatioIFS(ctx, std::move(translations), std::move(weights));
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

EqualRatioIFS load_ifs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open IFS file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_ifs(buf.str());
}

AffineWordMap compose_word(const EqualRatioIFS& ifs, const Word& word) {
  const auto& ctx = *ifs.context();
  Coords t = ctx.zero();
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    if (*it < 1 || *it > ifs.size()) throw DomainError("word letter " + std::to_string(*it) + " out of range");
    t = ctx.add(ctx.multiply_by_lambda(t), ifs.translations()[static_cast<std::size_t>(*it - 1)]);
  }
  return {static_cast<int>(word.size()), std::move(t)};
}

Interval attractor_interval(const EqualRatioIFS& ifs, const Rational& width) {
  const auto& ctx = *ifs.context();
  auto [lo_i, hi_i] = ifs.extreme_maps();
  const Coords& dlo = ifs.translations()[static_cast<std::size_t>(lo_i)];
  const Coords& dhi = ifs.translations()[static_cast<std::size_t>(hi_i)];
  Rational w = width;
  while (true) {
    Interval lam = ctx.is_rational() ? ctx.lambda().enclosure() : ctx.lambda().refine(w / 64).enclosure();
    Interval one_minus = Interval::point(1) - lam;
    auto eval = [&](const Coords& c) {
      Interval acc = Interval::point(c.back());
      for (auto i = c.size() - 1; i-- > 0;) acc = acc * lam + c[i];
      return acc / one_minus;
    };
    Interval a = eval(dlo);
    Interval b = eval(dhi);
    if (a.width() <= width && b.width() <= width) return {a.lo, b.hi};
    w /= 16;
  }
}

ClassTable::ClassTable(ContextPtr ctx, int level, std::vector<ClassEntry> entries)
    : ctx_(std::move(ctx)), level_(level), entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const ClassEntry& a, const ClassEntry& b) { return lex_compare(a.translation, b.translation) < 0; });
}

const ClassEntry* ClassTable::find(const Coords& translation) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), translation, [](const ClassEntry& e, const Coords& t) {
    return lex_compare(e.translation, t) < 0;
  });
  if (it == entries_.end() || it->translation != translation) return nullptr;
  return &*it;
}

BigInt ClassTable::total_multiplicity() const {
  BigInt s = 0;
  for (const auto& e : entries_) s += e.multiplicity;
  return s;
}

Rational ClassTable::total_weight() const {
  Rational s = 0;
  for (const auto& e : entries_) s += e.weight;
  return s;
}

ClassTable enumerate_classes(const EqualRatioIFS& ifs, int k, const EnumerationOptions& opts) {
  if (k < 0) throw DomainError("class level must be non-negative");
  const auto& ctx = *ifs.context();
  std::vector<ClassEntry> level{{ctx.zero(), BigInt(1), Rational(1)}};
  for (int j = 0; j < k; ++j) {
    std::vector<ClassEntry> next;
    std::unordered_map<Coords, std::size_t, CoordsHash> index;
    index.reserve(level.size() * static_cast<std::size_t>(ifs.size()));
    for (const auto& e : level) {
      Coords scaled = ctx.multiply_by_lambda(e.translation);
      for (int i = 0; i < ifs.size(); ++i) {
        Coords t = ctx.add(scaled, ifs.translations()[static_cast<std::size_t>(i)]);
        Rational w = e.weight * ifs.weights()[static_cast<std::size_t>(i)];
        auto [it, inserted] = index.try_emplace(t, next.size());
        if (inserted) {
          if (next.size() >= opts.entry_budget) {
            throw ResourceError("class table exceeds entry budget " + std::to_string(opts.entry_budget) +
                                    " at level " + std::to_string(j + 1),
                                j);
          }
          next.push_back({std::move(t), e.multiplicity, std::move(w)});
        } else {
          auto& target = next[it->second];
          target.multiplicity += e.multiplicity;
          target.weight += w;
        }
      }
    }
    level = std::move(next);
  }
  return ClassTable(ifs.context(), k, std::move(level));
}

std::vector<Word> class_members(const EqualRatioIFS& ifs, int k, const Coords& target,
                                const EnumerationOptions& opts) {
  if (k < 0) throw DomainError("word length must be non-negative");
  const auto& ctx = *ifs.context();
  const int l = ifs.size();
  {
    long double words = 1;
    for (int j = 0; j < k; ++j) words *= l;
    if (words > static_cast<long double>(opts.word_budget)) {
      throw ResourceError("class_members: " + std::to_string(l) + "^" + std::to_string(k) +
                              " words exceed the brute-force budget",
                          0);
    }
  }
  // terms[j][i] = d_i lambda^j; translation of w = sum_j terms[j][w_{j+1}].
  std::vector<std::vector<Coords>> terms(static_cast<std::size_t>(k));
  Coords power = ctx.constant(1);
  for (int j = 0; j < k; ++j) {
    for (const auto& d : ifs.translations()) terms[static_cast<std::size_t>(j)].push_back(ctx.multiply(d, power));
    power = ctx.multiply_by_lambda(power);
  }
  // Enclosure of every possible tail sum from position j on, for pruning.
  std::vector<DInterval> tail(static_cast<std::size_t>(k) + 1, DInterval::point(0));
  for (int j = k - 1; j >= 0; --j) {
    DInterval lo_hi{0, 0};
    bool first = true;
    for (const auto& t : terms[static_cast<std::size_t>(j)]) {
      DInterval e = ctx.enclosure_d(t);
      if (first) {
        lo_hi = e;
        first = false;
      } else {
        lo_hi = {std::min(lo_hi.lo, e.lo), std::max(lo_hi.hi, e.hi)};
      }
    }
    tail[static_cast<std::size_t>(j)] = lo_hi + tail[static_cast<std::size_t>(j) + 1];
  }
  const DInterval goal = ctx.enclosure_d(target);

  std::vector<Word> out;
  Word current(static_cast<std::size_t>(k));
  std::function<void(int, const Coords&)> dfs = [&](int j, const Coords& partial) {
    if (j == k) {
      if (partial == target) out.push_back(current);
      return;
    }
    DInterval reach = ctx.enclosure_d(partial) + tail[static_cast<std::size_t>(j)];
    if (reach.disjoint(goal)) return;
    for (int i = 0; i < l; ++i) {
      current[static_cast<std::size_t>(j)] = i + 1;
      dfs(j + 1, ctx.add(partial, terms[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]));
    }
  };
  dfs(0, ctx.zero());
  return out;
}

bool exceeds_lambda_power(const RingContext& ctx, const Rational& r, unsigned k) {
  if (ctx.lambda().is_rational()) return r > pow(ctx.lambda().enclosure().lo, k);
  // sign of (x^k - r) at lambda: negative means lambda^k < r.
  std::vector<Rational> q(k + 1, Rational(0));
  q[0] = -r;
  q[k] = 1;
  return ctx.lambda().sign_of(std::span<const Rational>(q)) < 0;
}

HeavyClass find_heavy_class(const EqualRatioIFS& ifs, const ClassTable& table) {
  const ClassEntry* best = nullptr;
  for (const auto& e : table.entries()) {
    // Entries are in lexicographic order, so strict > keeps the smallest vector on ties.
    if (best == nullptr || e.multiplicity > best->multiplicity) best = &e;
  }
  HeavyClass h{best->translation, best->multiplicity, best->weight, false};
  BigInt words;
  mpz_ui_pow_ui(words.get_mpz_t(), static_cast<unsigned long>(ifs.size()), static_cast<unsigned long>(table.level()));
  Rational ratio(h.multiplicity, words);
  ratio.canonicalize();
  h.exceeds_contraction = exceeds_lambda_power(*ifs.context(), ratio, static_cast<unsigned>(table.level()));
  return h;
}

HeavyClass find_heavy_class(const EqualRatioIFS& ifs, int k, const EnumerationOptions& opts) {
  return find_heavy_class(ifs, enumerate_classes(ifs, k, opts));
}

}  // namespace multifrac
