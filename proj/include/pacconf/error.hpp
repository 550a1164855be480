#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pacconf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or non-finite data, misaligned inputs, invalid probability vectors.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Inputs whose shapes disagree (sample vs. predictions, weights vs. family).
class DimensionError : public DataError {
 public:
  using DataError::DataError;
};

/// A sample in which some class has no example.
class InvalidSampleError : public DataError {
 public:
  using DataError::DataError;
};

/// A discrete distribution that is not a probability law or leaves a class empty.
class InvalidDistributionError : public DataError {
 public:
  using DataError::DataError;
};

/// A parameter outside the domain of the requested computation (delta, Q, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Confidence parameter delta outside (0, 1].
class DeltaRangeError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Infeasible or malformed simulation configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An iterative routine that did not reach its tolerance.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Text input that could not be parsed; carries the location of the fault.
class ParseError : public Error {
 public:
  ParseError(std::string file, std::size_t line, std::size_t column,
             const std::string& message)
      : Error(file + ":" + std::to_string(line) + ":" + std::to_string(column) +
              ": " + message),
        file_(std::move(file)),
        line_(line),
        column_(column) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::string file_;
  std::size_t line_;
  std::size_t column_;
};

}  // namespace pacconf
