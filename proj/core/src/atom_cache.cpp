#include "multifrac/atom_cache.hpp"

#include "multifrac/errors.hpp"

#include <fstream>
#include <sstream>

namespace multifrac {

namespace {

constexpr const char* kMagic = "multifrac-atoms v1";

std::string modulus_line(const RingContext& ctx) {
  std::string s;
  for (const auto& c : ctx.modulus().coeffs()) s += (s.empty() ? "" : " ") + c.get_str();
  return s;
}

bool read_header(std::istream& in, const std::string& key, std::string& value) {
  std::string line;
  if (!std::getline(in, line)) return false;
  const std::string prefix = key + ": ";
  if (line.rfind(prefix, 0) != 0) return false;
  value = line.substr(prefix.size());
  return true;
}

}  // namespace

std::string cache_file_name(const EqualRatioIFS& ifs, int depth) {
  return "atoms-" + ifs.digest() + "-" + std::to_string(depth) + ".txt";
}

void save_class_table(const std::filesystem::path& path, const EqualRatioIFS& ifs, const ClassTable& table) {
  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw DomainError("cannot write cache file " + tmp.string());
    out << kMagic << "\n";
    out << "modulus: " << modulus_line(*ifs.context()) << "\n";
    out << "digest: " << ifs.digest() << "\n";
    out << "depth: " << table.level() << "\n";
    out << "atoms: " << table.size() << "\n";
    for (const auto& e : table.entries()) {
      for (const auto& c : e.translation) out << c.get_str() << " ";
      out << "| " << e.weight.get_num().get_str() << " " << e.weight.get_den().get_str() << " "
          << e.multiplicity.get_str() << "\n";
    }
    if (!out) throw DomainError("failed writing cache file " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::optional<ClassTable> load_class_table(const std::filesystem::path& path, const EqualRatioIFS& ifs, int depth,
                                           std::string* reason) {
  auto fail = [reason](std::string why) -> std::optional<ClassTable> {
    if (reason) *reason = std::move(why);
    return std::nullopt;
  };
  std::ifstream in(path);
  if (!in) return fail("missing");
  std::string line;
  if (!std::getline(in, line) || line != kMagic) return fail("bad magic line");
  std::string value;
  if (!read_header(in, "modulus", value) || value != modulus_line(*ifs.context())) return fail("modulus mismatch");
  if (!read_header(in, "digest", value) || value != ifs.digest()) return fail("digest mismatch");
  if (!read_header(in, "depth", value) || value != std::to_string(depth)) return fail("depth mismatch");
  if (!read_header(in, "atoms", value)) return fail("missing atom count");
  std::size_t count = 0;
  try {
    count = std::stoull(value);
  } catch (const std::exception&) {
    return fail("bad atom count");
  }
  const auto dim = static_cast<std::size_t>(ifs.context()->dimension());
  std::vector<ClassEntry> entries;
  entries.reserve(count);
  Rational total_weight = 0;
  BigInt total_mult = 0;
  while (std::getline(in, line)) {
    auto bar = line.find('|');
    if (bar == std::string::npos) return fail("malformed atom line");
    std::istringstream left(line.substr(0, bar));
    std::istringstream right(line.substr(bar + 1));
    ClassEntry e;
    std::string tok;
    try {
      while (left >> tok) e.translation.push_back(parse_rational(tok));
      std::string num, den, mult;
      if (!(right >> num >> den >> mult) || (right >> tok)) return fail("malformed atom line");
      Rational w(BigInt(num, 10), BigInt(den, 10));
      if (w.get_den() == 0) return fail("zero denominator");
      w.canonicalize();
      e.weight = w;
      e.multiplicity = BigInt(mult, 10);
    } catch (const std::exception&) {
      return fail("unparsable number");
    }
    if (e.translation.size() != dim) return fail("coordinate length mismatch");
    if (sgn(e.weight) <= 0 || sgn(e.multiplicity) <= 0) return fail("non-positive weight or multiplicity");
    total_weight += e.weight;
    total_mult += e.multiplicity;
    entries.push_back(std::move(e));
  }
  if (entries.size() != count) return fail("atom count mismatch");
  if (total_weight != 1) return fail("weights do not sum to 1");
  BigInt expected;
  mpz_ui_pow_ui(expected.get_mpz_t(), static_cast<unsigned long>(ifs.size()), static_cast<unsigned long>(depth));
  if (total_mult != expected) return fail("multiplicities do not sum to l^depth");
  try {
    ClassTable table(ifs.context(), depth, std::move(entries));
    for (std::size_t i = 1; i < table.size(); ++i) {
      if (table.entries()[i].translation == table.entries()[i - 1].translation) return fail("duplicate atoms");
    }
    return table;
  } catch (const std::exception& ex) {
    return fail(ex.what());
  }
}

ClassTable cached_classes(const EqualRatioIFS& ifs, int depth, const std::filesystem::path& dir,
                          const EnumerationOptions& opts, CacheOutcome* outcome) {
  CacheOutcome local;
  if (dir.empty()) {
    if (outcome) *outcome = local;
    return enumerate_classes(ifs, depth, opts);
  }
  const auto path = dir / cache_file_name(ifs, depth);
  std::string reason;
  if (std::filesystem::exists(path)) {
    if (auto table = load_class_table(path, ifs, depth, &reason)) {
      local.hit = true;
      if (outcome) *outcome = local;
      return std::move(*table);
    }
    local.rejected = true;
    local.reason = reason;
  }
  ClassTable table = enumerate_classes(ifs, depth, opts);
  save_class_table(path, ifs, table);
  if (outcome) *outcome = local;
  return table;
}

}  // namespace multifrac
