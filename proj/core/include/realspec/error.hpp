#pragma once

#include <stdexcept>
#include <string>

namespace realspec {

/// Parameter outside the family's admissible range (e.g. gamma <= 0, nu <= -1).
class ParameterDomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// No closed-form or numeric density exists for the requested law.
class DensityUnknownError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A route (convolution, characteristic function, ...) cannot handle the law.
class UnsupportedRouteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure did not reach the requested tolerance. Carries the
/// best estimate obtained so that callers can still report it.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_estimate, double error_estimate)
      : std::runtime_error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

/// Double-precision evaluation of a cancelling sum lost too many digits.
class PrecisionLossError : public std::runtime_error {
 public:
  PrecisionLossError(const std::string& what, double loss_estimate)
      : std::runtime_error(what), loss_estimate_(loss_estimate) {}
  double loss_estimate() const noexcept { return loss_estimate_; }

 private:
  double loss_estimate_;
};

class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Data are inconsistent with the fitted model (e.g. P_hat >= P_inf).
class ModelViolationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// JSON document does not match the shipped schema.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace realspec
