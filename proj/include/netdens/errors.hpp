#pragma once

#include <stdexcept>
#include <string>

namespace netdens {

// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated value-range precondition (non-positive distance, lambda >= 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Violated structural precondition (dimension mismatch between inputs).
class ContractError : public Error {
 public:
  using Error::Error;
};

// Numerical failure (eigensolver non-convergence, non-finite gradient).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Rate optimization has no candidate combination meeting the density target.
// Carries the smallest density value any combination achieved.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, double min_lambda)
      : Error(what), min_lambda_(min_lambda) {}

  double min_lambda() const { return min_lambda_; }

 private:
  double min_lambda_;
};

// Config / file parse failure; refers back to the offending line.
class ParseError : public Error {
 public:
  ParseError(const std::string& path, int line, const std::string& what)
      : Error(path + ":" + std::to_string(line) + ": " + what),
        path_(path),
        line_(line) {}

  explicit ParseError(const std::string& what) : Error(what), line_(0) {}

  const std::string& path() const { return path_; }
  int line() const { return line_; }

 private:
  std::string path_;
  int line_;
};

}  // namespace netdens
