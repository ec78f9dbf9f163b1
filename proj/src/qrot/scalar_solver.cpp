#include "qrot/scalar_solver.hpp"

#include <algorithm>
#include <cmath>

#include "qrot/errors.hpp"

namespace qrot {

namespace {

void check(const ScalarEquation& eq) {
  if (eq.breakpoints.empty()) throw DimensionError("scalar equation needs at least one breakpoint");
  if (!(eq.rhs > 0.0)) throw DomainError("scalar equation requires b > 0; the root is not unique otherwise");
}

}  // namespace

double solve_direct_search(const ScalarEquation& eq) {
  check(eq);
  const double b = eq.rhs;
  std::vector<double> y(eq.breakpoints.begin(), eq.breakpoints.end());
  std::sort(y.begin(), y.end());
  const int n = static_cast<int>(y.size());

  // On [y_(k), y_(k+1)] we have f(x) = k x - prefix_k with
  // prefix_k = y_(1) + ... + y_(k). Scan until f(y_(k+1)) exceeds b.
  double prefix = y[0];
  for (int k = 1; k < n; ++k) {
    const double f_next = k * y[k] - prefix;
    if (b < f_next) return (b + prefix) / k;
    prefix += y[k];
  }
  return (b + prefix) / n;
}

double solve_scalar_newton(const ScalarEquation& eq, ScalarNewtonStats* stats) {
  check(eq);
  const auto y = eq.breakpoints;
  const double b = eq.rhs;
  const int n = static_cast<int>(y.size());
  const double y_max = *std::max_element(y.begin(), y.end());

  // Starting above max(y) makes the iterates decrease monotonically and
  // land on the root after at most n updates.
  double x = y_max + b / n;
  if (stats) {
    stats->steps = 0;
    stats->iterates.assign(1, x);
  }
  const double tol = 1e-14 * std::max(1.0, b);

  for (int updates = 0;;) {
    double fx = 0.0;
    int slope = 0;  // f'(x) = #{j : x >= y_j}
    for (double yj : y) {
      const double d = x - yj;
      if (d >= 0.0) {
        fx += d;
        ++slope;
      }
    }
    if (std::abs(fx - b) <= tol || updates == n) break;
    if (slope == 0) {
      // Rounded below min(y); restart above it. One Newton step from any
      // point with positive slope lands at or above the root again.
      x = y_max + b / n;
    } else {
      x -= (fx - b) / slope;
    }
    ++updates;
    if (stats) {
      ++stats->steps;
      stats->iterates.push_back(x);
    }
  }
  return x;
}

}  // namespace qrot
