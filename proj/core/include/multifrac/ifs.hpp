#pragma once

#include "multifrac/ring.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace multifrac {

/// Word i_1 ... i_n with 1-based map indices; S_word = S_{i_1} o ... o S_{i_n}.
using Word = std::vector<int>;

Word parse_word(std::string_view digits);
std::string word_to_string(const Word& w);

/// Equal-contraction-ratio IFS {x -> lambda x + d_i} on the line with probability weights.
class EqualRatioIFS {
 public:
  /// Validates: at least two maps, weights positive and summing to 1 exactly,
  /// lambda in (0, 1), translations pairwise distinct.
  EqualRatioIFS(ContextPtr ctx, std::vector<Coords> translations, std::vector<Rational> weights);

  const ContextPtr& context() const { return ctx_; }
  int size() const { return static_cast<int>(translations_.size()); }
  const std::vector<Coords>& translations() const { return translations_; }
  const std::vector<Rational>& weights() const { return weights_; }
  bool equal_weights() const;
  /// Least common multiple of the weight denominators.
  BigInt weight_denominator() const;

  /// Indices of the smallest and largest translation (real order).
  std::pair<int, int> extreme_maps() const;

  /// Canonical text in the IFS file grammar (parse_ifs round-trips it).
  std::string to_text() const;
  /// FNV-1a digest of to_text(), as 16 hex digits.
  std::string digest() const;

 private:
  ContextPtr ctx_;
  std::vector<Coords> translations_;
  std::vector<Rational> weights_;
};

/// Line-oriented IFS description:
///   modulus: <ascending integer coefficients of the monic modulus of lambda>
///   ratio: root in (<lo>,<hi>)   |   ratio: rational <p/q>
///   map: <coordinates in the lambda-power basis>   (one per map)
///   weight: <rational>                              (one per map, same order)
/// '#' starts a comment. Errors carry line numbers.
EqualRatioIFS parse_ifs(std::string_view text);
EqualRatioIFS load_ifs(const std::filesystem::path& path);

struct AffineWordMap {
  int length = 0;
  Coords translation;  // x -> lambda^length x + translation
};

AffineWordMap compose_word(const EqualRatioIFS& ifs, const Word& word);

/// Convex hull of the attractor, [min d_i, max d_i] / (1 - lambda), enclosed to within `width`
/// at each end.
Interval attractor_interval(const EqualRatioIFS& ifs, const Rational& width);

struct ClassEntry {
  Coords translation;
  BigInt multiplicity;  // #[I]
  Rational weight;      // sum over member words of the product of weights
};

/// Level-k equivalence classes of words (S_I = S_J), sorted by lexicographic coordinate order.
class ClassTable {
 public:
  ClassTable(ContextPtr ctx, int level, std::vector<ClassEntry> entries);

  int level() const { return level_; }
  const ContextPtr& context() const { return ctx_; }
  const std::vector<ClassEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const ClassEntry* find(const Coords& translation) const;

  BigInt total_multiplicity() const;
  Rational total_weight() const;

 private:
  ContextPtr ctx_;
  int level_;
  std::vector<ClassEntry> entries_;
};

struct EnumerationOptions {
  std::uint64_t entry_budget = 100'000'000;
  /// Upper bound on l^k for brute-force word enumeration in class_members.
  std::uint64_t word_budget = std::uint64_t{1} << 26;
};

/// k-fold dynamic programming: level j+1 applies every S_i to every level-j class
/// (t <- lambda t + d_i) and merges equal canonical vectors. Throws ResourceError when
/// the entry budget is exceeded.
ClassTable enumerate_classes(const EqualRatioIFS& ifs, int k, const EnumerationOptions& opts = {});

/// All words of length k whose composed translation equals `target`, in lexicographic order.
std::vector<Word> class_members(const EqualRatioIFS& ifs, int k, const Coords& target,
                                const EnumerationOptions& opts = {});

struct HeavyClass {
  Coords translation;
  BigInt multiplicity;
  Rational weight;
  /// Certified #[I] / l^k > lambda^k.
  bool exceeds_contraction = false;
};

/// Class of maximal multiplicity (ties: smallest coordinate vector in lexicographic order).
HeavyClass find_heavy_class(const EqualRatioIFS& ifs, int k, const EnumerationOptions& opts = {});
HeavyClass find_heavy_class(const EqualRatioIFS& ifs, const ClassTable& table);

/// Certified r > lambda^k.
bool exceeds_lambda_power(const RingContext& ctx, const Rational& r, unsigned k);

}  // namespace multifrac
