#pragma once

#include <stdexcept>
#include <string>

namespace multifrac {

/// A precondition on the mathematical input was violated (bad degree, non-monic modulus, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A configured budget (entries, words, pairs) would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, int level_reached)
      : std::runtime_error(what), level_reached_(level_reached) {}

  int level_reached() const noexcept { return level_reached_; }

 private:
  int level_reached_;
};

/// Malformed text input; `line` is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace multifrac
