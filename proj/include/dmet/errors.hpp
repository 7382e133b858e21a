#pragma once

#include <stdexcept>
#include <string>

namespace dmet {

// Process exit codes; every library exception maps onto one of these.
enum class ExitCode : int {
  ok = 0,
  parse = 2,
  fit = 3,
  calibration = 4,
  config = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ExitCode exit_code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

// Malformed or unreadable input (bad rows, missing headers, broken files).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(ExitCode::parse, what) {}
};

// Too few data points for the requested operation.
class InsufficientDataError : public ParseError {
 public:
  explicit InsufficientDataError(const std::string& what) : ParseError(what) {}
};

// Numerical estimation failed (non-convergence, sign errors, degenerate data).
class FitError : public Error {
 public:
  explicit FitError(const std::string& what) : Error(ExitCode::fit, what) {}
};

// Two fit templates are linearly indistinguishable; message names both.
class DegeneracyError : public FitError {
 public:
  explicit DegeneracyError(const std::string& what) : FitError(what) {}
};

// A calibration factor cannot be applied (e.g. acquisition fingerprint mismatch).
class CalibrationError : public Error {
 public:
  explicit CalibrationError(const std::string& what)
      : Error(ExitCode::calibration, what) {}
};

// Invalid configuration or argument values.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ExitCode::config, what) {}
};

// Argument outside its numeric domain (nonpositive length, function pole, ...).
class DomainError : public ConfigError {
 public:
  explicit DomainError(const std::string& what) : ConfigError(what) {}
};

// Index or position outside the valid range.
class RangeError : public ConfigError {
 public:
  explicit RangeError(const std::string& what) : ConfigError(what) {}
};

}  // namespace dmet
