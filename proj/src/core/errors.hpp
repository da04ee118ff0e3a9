#pragma once

#include <stdexcept>
#include <string>

namespace dtebell {

// Closed-form Gaussian results are only derived for symmetric (50:50) beam
// splitters; anything else must go through the quadrature path.
class UnsupportedSplittingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The supplied momentum distribution does not integrate to 1 over its
// support box.
class NormalizationError : public std::runtime_error {
 public:
  NormalizationError(const std::string& what, double norm, double norm_error)
      : std::runtime_error(what), norm_(norm), norm_error_(norm_error) {}
  double norm() const { return norm_; }
  double norm_error() const { return norm_error_; }

 private:
  double norm_;
  double norm_error_;
};

// Adaptive quadrature ran out of subdivision budget before reaching the
// requested tolerance. Carries the best available estimate.
class ToleranceNotReached : public std::runtime_error {
 public:
  ToleranceNotReached(const std::string& what, double best_value,
                      double error_estimate)
      : std::runtime_error(what),
        best_value_(best_value),
        error_estimate_(error_estimate) {}
  double best_value() const { return best_value_; }
  double error_estimate() const { return error_estimate_; }

 private:
  double best_value_;
  double error_estimate_;
};

// CHSH settings tagged for one analysis mode were passed to the other.
class ModeMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The fringe/envelope scales of a scenario leave no resolvable optimization
// window.
class OptimizationWindowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dtebell
