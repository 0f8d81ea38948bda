#pragma once

#include "multifrac/awsc.hpp"
#include "multifrac/spectrum.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace multifrac::cli {

using nlohmann::json;

extern const char* const kToolVersion;

struct Metadata {
  std::string digest;
  int m = 0;
  int n = 0;
  std::string method;
  std::string version = kToolVersion;
};

json to_json(const Metadata& meta);
Metadata metadata_from_json(const json& j);

json to_json(const SpectrumCurve& curve);
SpectrumCurve spectrum_from_json(const json& j);

json to_json(const LegendreCurve& curve);
LegendreCurve legendre_from_json(const json& j);

json to_json(const AwscProfile& profile);
AwscProfile awsc_from_json(const json& j);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

json to_json(const CheckResult& check);

/// Names accepted by run_checks' `only` filter.
const std::vector<std::string>& check_names();

/// Runs the reproduction checks (all when `only` is empty). Class tables for the Table 1 check go
/// through the cache in `cache_dir` when it is non-empty.
std::vector<CheckResult> run_checks(const std::string& only, const std::filesystem::path& cache_dir);

/// The ten words listed for the class of 122211121112221 at level 15.
const std::vector<std::string>& table1_words();

}  // namespace multifrac::cli
