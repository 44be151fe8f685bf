#pragma once

#include <stdexcept>
#include <string>

namespace heis {

// Argument outside the mathematical domain of an operation (r <= 0, lambda = 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Binary operation on objects that do not live in the same space
// (points of different dimension, coefficients on different grids).
class IncompatibleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A construction precondition that the caller asserted does not hold,
// e.g. a divergent decay profile handed to the compact-support builder.
class RefusalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Panel refinement disagreed with the base rule by more than the tolerance.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, int k, double lambda, double discrepancy)
      : std::runtime_error(what), k_(k), lambda_(lambda), discrepancy_(discrepancy) {}

  int k() const noexcept { return k_; }
  double lambda() const noexcept { return lambda_; }
  double discrepancy() const noexcept { return discrepancy_; }

 private:
  int k_;
  double lambda_;
  double discrepancy_;
};

// A value that should be finite is not; carries the offending spectral cell.
class NonFiniteError : public std::runtime_error {
 public:
  NonFiniteError(const std::string& what, int k, double lambda)
      : std::runtime_error(what), k_(k), lambda_(lambda) {}

  int k() const noexcept { return k_; }
  double lambda() const noexcept { return lambda_; }

 private:
  int k_;
  double lambda_;
};

// Spectral moments that the grid cannot resolve because the data have not
// decayed at the grid boundary.
class TailError : public std::runtime_error {
 public:
  TailError(const std::string& what, int first_failing_power)
      : std::runtime_error(what), power_(first_failing_power) {}

  int first_failing_power() const noexcept { return power_; }

 private:
  int power_;
};

}  // namespace heis
