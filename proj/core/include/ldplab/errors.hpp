#pragma once

#include <stdexcept>
#include <string>

namespace ldp {

/// Invalid argument or parameter outside the admissible range.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Base for failures of a numerical routine on valid input.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConvergenceError : NumericalError {
  using NumericalError::NumericalError;
};

/// Quadrature or discretization could not reach the requested accuracy.
struct AccuracyError : NumericalError {
  using NumericalError::NumericalError;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw DomainError(what);
}

}  // namespace ldp
