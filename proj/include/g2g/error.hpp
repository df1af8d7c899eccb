#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace g2g {

// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A model, detector or campaign parameter set violates its invariants.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Input data is unusable for the requested computation
// (empty stream, too few samples, zero variance, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

// Malformed text input. `line()` is 1-based; 0 when the error is not tied
// to a particular line (e.g. a missing header at end of input).
class ParseError : public Error {
 public:
  ParseError(std::string reason, std::size_t line)
      : Error(line == 0 ? reason : "line " + std::to_string(line) + ": " + reason),
        reason_(std::move(reason)),
        line_(line) {}

  const std::string& reason() const noexcept { return reason_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string reason_;
  std::size_t line_;
};

}  // namespace g2g
