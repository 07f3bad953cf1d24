#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wordle {

/// Input data failed validation (bad rows, invariant violations, unknown words).
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A text or CSV input could not be parsed. Carries the offending 1-based line.
class ParseError : public DataError {
public:
  ParseError(std::string source, std::size_t line, const std::string& what)
      : DataError(source + ":" + std::to_string(line) + ": " + what),
        source_(std::move(source)), line_(line) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

private:
  std::string source_;
  std::size_t line_;
};

/// A numerical routine failed (singular system, non-convergence, separation).
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace wordle
