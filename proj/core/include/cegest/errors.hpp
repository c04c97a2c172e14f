#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cegest {

/// Malformed input text (edge lists, query files, catalogue files).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  explicit ParseError(const std::string& what) : ParseError(what, 0) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Structurally invalid query, cover, or argument combination.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Bad configuration value (h < 2, unknown method name, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A CEG could not be built or traversed because a statistic is absent.
class MissingStatisticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested partition budget does not fit the sketch attribute set.
class SketchPlanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Path enumeration exceeded its configured cap.
class EnumerationOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cegest
