#pragma once

#include <stdexcept>
#include <string>

namespace blowup {

// Bad input or precondition violation (t <= 0, q <= 1, empty grid, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Configuration could not be parsed or names an unknown option.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operation called for a nonlinearity it does not apply to (eval_U on the
// exponential equation and vice versa).
class WrongVariant : public DomainError {
 public:
  using DomainError::DomainError;
};

// A problem outside the regime where fundamental solutions exist.
class Inadmissible : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class InsufficientData : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, double estimate = 0.0,
                   double error_bound = 0.0)
      : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}
  double estimate() const { return estimate_; }
  double error_bound() const { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

class StepFailure : public NumericalFailure {
 public:
  StepFailure(const std::string& what, double time)
      : NumericalFailure(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

class ComparisonViolation : public NumericalFailure {
 public:
  ComparisonViolation(const std::string& what, double time, double radius,
                      double value, double bound)
      : NumericalFailure(what, value), time_(time), radius_(radius), bound_(bound) {}
  double time() const { return time_; }
  double radius() const { return radius_; }
  double bound() const { return bound_; }

 private:
  double time_;
  double radius_;
  double bound_;
};

}  // namespace blowup
