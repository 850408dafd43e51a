#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gradefit {

// Bad or inconsistent input data (duplicate pairs, unknown ids, bad tokens).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A DataError tied to a line of a text input.
class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& message)
      : DataError("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Arguments that violate an operation's preconditions.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace gradefit
