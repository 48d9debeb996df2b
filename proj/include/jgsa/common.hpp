#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace jgsa {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Class ids are 1-based; 0 is never a valid label.
using Label = std::int32_t;
using Labels = std::vector<Label>;

/// Root of the library's exception hierarchy. The CLI maps each subclass to
/// an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad or inconsistent configuration / parameters (exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data or violated dataset invariants (exit code 3).
class DataError : public Error {
 public:
  using Error::Error;
};

/// File parse failure with the offending 1-based line number.
class ParseError : public DataError {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& what)
      : DataError(path + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Numerical failure: a matrix that should be positive definite is not, even
/// after jitter escalation (exit code 4).
class ConditioningError : public Error {
 public:
  ConditioningError(const std::string& what, Eigen::Index pivot, double jitter)
      : Error(what), pivot_(pivot), jitter_(jitter) {}

  Eigen::Index pivot() const noexcept { return pivot_; }
  double jitter() const noexcept { return jitter_; }

 private:
  Eigen::Index pivot_;
  double jitter_;
};

/// Largest class id in a label vector (0 for an empty vector).
Label max_label(const Labels& labels);

}  // namespace jgsa
