#pragma once

#include <stdexcept>
#include <string>

namespace lqrl {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Raised when a matrix that must be positive definite is not. Carries the
// smallest eigenvalue that was found.
class DefinitenessError : public Error {
 public:
  DefinitenessError(const std::string& what, double eigenvalue)
      : Error(what + " (min eigenvalue " + std::to_string(eigenvalue) + ")"),
        eigenvalue_(eigenvalue) {}
  double eigenvalue() const { return eigenvalue_; }

 private:
  double eigenvalue_;
};

// A fixed-point iteration, series or learning run that failed to stay bounded
// or to converge. `residual` is the last measured gap (or norm for runs).
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace lqrl
