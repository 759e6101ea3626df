#pragma once

#include <stdexcept>
#include <string>

namespace calderon {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept = 0;
};

#define CALDERON_ERROR_KIND(Name, label)              \
  class Name : public Error {                         \
   public:                                            \
    using Error::Error;                               \
    const char* kind() const noexcept override {      \
      return label;                                   \
    }                                                 \
  };

CALDERON_ERROR_KIND(ParameterError, "parameter")
CALDERON_ERROR_KIND(IndexError, "index")
CALDERON_ERROR_KIND(RangeError, "range")
CALDERON_ERROR_KIND(NumericError, "numeric")
CALDERON_ERROR_KIND(DependencyError, "dependency")
CALDERON_ERROR_KIND(SolvabilityError, "solvability")
CALDERON_ERROR_KIND(OutOfBallError, "out-of-ball")
CALDERON_ERROR_KIND(BudgetError, "budget")

#undef CALDERON_ERROR_KIND

/// Orthogonalization lost too many digits at radial index `failing_k`.
class ConditioningError : public Error {
 public:
  ConditioningError(int failing_k, double estimate, double budget);
  const char* kind() const noexcept override { return "conditioning"; }
  int failing_k() const noexcept { return failing_k_; }
  double estimate() const noexcept { return estimate_; }

 private:
  int failing_k_;
  double estimate_;
};

/// A residual budget could not be met; carries the best residual reached.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, double achieved_residual, double budget);
  const char* kind() const noexcept override { return "infeasible"; }
  double achieved_residual() const noexcept { return achieved_; }
  double budget() const noexcept { return budget_; }

 private:
  double achieved_;
  double budget_;
};

}  // namespace calderon
