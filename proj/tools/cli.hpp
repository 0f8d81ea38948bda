#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace multifrac::cli {

enum ExitCode : int {
  kOk = 0,
  kUnexpected = 1,
  kConfigError = 2,
  kResourceBudget = 3,
  kVerificationFailure = 4,
};

/// Entry point shared by the binary and the tests. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace multifrac::cli
