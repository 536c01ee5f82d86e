#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace plantsched {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input data or configuration. Carries every violated rule, not just the first.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::string message) : Error(message), issues_{std::move(message)} {}
  explicit ValidationError(std::vector<std::string> issues)
      : Error(join(issues)), issues_(std::move(issues)) {}

  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& issues) {
    std::string out;
    for (const auto& s : issues) {
      if (!out.empty()) out += "; ";
      out += s;
    }
    return out;
  }

  std::vector<std::string> issues_;
};

/// A value fell outside a supported range (calendar days, horizons).
class RangeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Parse failure tied to a line of an input file (1-based, header is line 1).
class ParseError : public ValidationError {
 public:
  ParseError(std::size_t line, const std::string& message)
      : ValidationError("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Vector or matrix dimensions disagree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Kernel matrix stayed non-positive-definite after the full jitter ladder.
class SingularKernelError : public Error {
 public:
  using Error::Error;
};

/// The scheduling instance admits no schedule under the requested constraints.
class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(std::string message, std::vector<int> binding_weeks = {})
      : Error(std::move(message)), binding_weeks_(std::move(binding_weeks)) {}

  /// Weeks whose load could not be brought under capacity (heuristic repair only).
  const std::vector<int>& binding_weeks() const noexcept { return binding_weeks_; }

 private:
  std::vector<int> binding_weeks_;
};

/// The exact search hit its node budget before proving optimality.
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace plantsched
