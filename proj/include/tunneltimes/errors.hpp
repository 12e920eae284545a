#pragma once

#include <stdexcept>
#include <string>

namespace tunneltimes {

// Invalid physical parameters, grids, or configuration values.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Quadrature, differentiation, or propagation failed to reach its tolerance.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double best_estimate = 0.0, double achieved = 0.0)
      : std::runtime_error(what), best_estimate_(best_estimate), achieved_(achieved) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double achieved_tolerance() const noexcept { return achieved_; }

 private:
  double best_estimate_;
  double achieved_;
};

// An identity that must hold algebraically did not (internal bug or bad input).
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace tunneltimes
