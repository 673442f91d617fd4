#pragma once

#include <stdexcept>
#include <string>

namespace fdcp {

/// Invalid distribution or model parameter (non-positive rate, variance, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed call arguments, e.g. an interval with a > b.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Query outside the observed horizon.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Inconsistent configuration: grid misalignment, mismatched threshold table.
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable input or unwritable output.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file; carries the offending line number (1-based).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace fdcp
