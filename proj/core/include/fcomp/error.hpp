#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fcomp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad or inconsistent inputs. CLI exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A derived structure contradicts itself (e.g. a decoder table collision).
// Treated as an input defect, CLI exit code 1.
class InconsistencyError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A combinatorial routine hit its work cap. CLI exit code 2.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::size_t budget)
      : Error(what), budget(budget) {}
  std::size_t budget;
};

// An iterative solver stopped before reaching its tolerance. Carries the
// best value seen and the residual gap. CLI exit code 2.
class ConvergenceFailure : public Error {
 public:
  ConvergenceFailure(const std::string& what, double best_value, double gap,
                     std::size_t iterations)
      : Error(what), best_value(best_value), gap(gap), iterations(iterations) {}
  double best_value;
  double gap;
  std::size_t iterations;
};

}  // namespace fcomp
