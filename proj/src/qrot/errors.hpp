#ifndef QROT_ERRORS_HPP
#define QROT_ERRORS_HPP

#include <stdexcept>

namespace qrot {

// Shape mismatch between operands (vector lengths, matrix dimensions).
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Numerically invalid input: non-positive marginal, unbalanced mass,
// non-positive gamma, rhs <= 0 in the scalar equation, ...
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Failure inside a solver: linear solve did not converge, line search
// underflow, projection cycle budget exhausted.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Floating-point breakdown of the naive Sinkhorn iteration.
struct StabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qrot

#endif
