#pragma once

#include "multifrac/ifs.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace multifrac {

/// Versioned, line-oriented class-table file:
///   multifrac-atoms v1
///   modulus: <ascending coefficients>
///   digest: <ifs digest>
///   depth: <k>
///   atoms: <count>
///   <coords ...> | <weight numerator> <weight denominator> <multiplicity>
std::string cache_file_name(const EqualRatioIFS& ifs, int depth);

void save_class_table(const std::filesystem::path& path, const EqualRatioIFS& ifs, const ClassTable& table);

/// Reads and revalidates a cached table: header must match the system and depth, coordinate
/// vectors must have the ring dimension, weights must sum to 1 and multiplicities to l^depth.
/// Returns nullopt (with a reason) on any mismatch or corruption.
std::optional<ClassTable> load_class_table(const std::filesystem::path& path, const EqualRatioIFS& ifs, int depth,
                                           std::string* reason = nullptr);

struct CacheOutcome {
  bool hit = false;
  bool rejected = false;  // a file existed but failed revalidation
  std::string reason;
};

/// enumerate_classes with an on-disk cache in `dir` (no caching when dir is empty).
ClassTable cached_classes(const EqualRatioIFS& ifs, int depth, const std::filesystem::path& dir,
                          const EnumerationOptions& opts = {}, CacheOutcome* outcome = nullptr);

}  // namespace multifrac
