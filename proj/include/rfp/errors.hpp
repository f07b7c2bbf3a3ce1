// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rfp {

/// Base of every error the toolkit throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed edge-list or feature file content.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class BoundsError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid RfpConfig or a configuration incompatible with the operator.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Parameter outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Base for faults of the numerical pipeline (overflow, rank collapse, ...).
class NumericError : public Error {
 public:
  using Error::Error;
};

class DegenerateColumnError : public NumericError {
 public:
  explicit DegenerateColumnError(std::size_t column)
      : NumericError("degenerate (zero-norm) column " + std::to_string(column)),
        column_(column) {}
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

class RankCollapseError : public NumericError {
 public:
  explicit RankCollapseError(std::size_t column)
      : NumericError("rank collapse: column " + std::to_string(column) +
                     " is numerically dependent on the preceding columns"),
        column_(column) {}
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

class NumericOverflowError : public NumericError {
 public:
  explicit NumericOverflowError(std::size_t step)
      : NumericError("non-finite values after propagation step " + std::to_string(step)),
        step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Exact integer result does not fit the 64-bit range.
class IntegerOverflowError : public NumericError {
 public:
  using NumericError::NumericError;
};

class UndefinedRhoError : public NumericError {
 public:
  using NumericError::NumericError;
};

class AsymmetryError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Dense oracle requested above the oracle size cap.
class OracleCapError : public Error {
 public:
  using Error::Error;
};

class UnsupportedDiagnosticError : public Error {
 public:
  using Error::Error;
};

class InsufficientStepsError : public Error {
 public:
  using Error::Error;
};

/// Two independent computations of the same exact quantity disagree.
class InternalConsistencyError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rfp
