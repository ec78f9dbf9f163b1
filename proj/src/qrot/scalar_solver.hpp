#ifndef QROT_SCALAR_SOLVER_HPP
#define QROT_SCALAR_SOLVER_HPP

#include <span>
#include <vector>

namespace qrot {

// The scalar piecewise-linear equation
//
//   f(x) = sum_j (x - y_j)_+ = b,   b > 0,
//
// which every row/column update of the Gauss-Seidel scheme reduces to.
// b > 0 makes the root unique.
struct ScalarEquation {
  std::span<const double> breakpoints;  // y, n >= 1
  double rhs = 0.0;                     // b
};

// Sorts the breakpoints, locates the interval containing the root by
// evaluating f at the breakpoints, then inverts the linear piece.
double solve_direct_search(const ScalarEquation& eq);

struct ScalarNewtonStats {
  int steps = 0;                  // number of Newton updates performed
  std::vector<double> iterates;   // x^0, x^1, ... (monotonically decreasing)
};

// Semismooth Newton on f with f'(x) = #{j : x >= y_j}, started at
// x^0 = max(y) + b/n. The iterates decrease monotonically and the
// method terminates after at most n updates.
double solve_scalar_newton(const ScalarEquation& eq, ScalarNewtonStats* stats = nullptr);

}  // namespace qrot

#endif
