#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qpeci {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based, 0 when not line-specific.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

/// Input that parses but contradicts itself (asymmetry, conflicting duplicates).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// Electron counts that no determinant of the partition can satisfy.
class EmptyBasisError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> residuals)
      : Error(what), residuals_(std::move(residuals)) {}
  const std::vector<double>& best_residuals() const { return residuals_; }

 private:
  std::vector<double> residuals_;
};

/// A determinant expected in a basis is not there.
class InclusionError : public Error {
 public:
  using Error::Error;
};

/// An eigenvalue falls outside the phase-estimation energy window.
class WindowError : public Error {
 public:
  using Error::Error;
};

}  // namespace qpeci
