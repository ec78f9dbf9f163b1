#include "qrot/grid.hpp"

#include <cmath>
#include <string>

namespace qrot {

namespace {

void check_cells(int n) {
  if (n < 1) throw DomainError("grid needs at least one cell");
}

}  // namespace

Matrix squared_cost_coefficients(int n) {
  check_cells(n);
  Matrix c(n, n);
  const double inv_n_sq = 1.0 / (static_cast<double>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double d = i - j;
      c(i, j) = (d * d + 1.0 / 6.0) * inv_n_sq;
    }
  return c;
}

Matrix midpoint_cost_coefficients(int n, CostKind kind) {
  check_cells(n);
  Matrix c(n, n);
  for (int i = 0; i < n; ++i) {
    const double mi = (i + 0.5) / n;
    for (int j = 0; j < n; ++j) {
      const double dist = std::abs(mi - (j + 0.5) / n);
      switch (kind) {
        case CostKind::squared: c(i, j) = dist * dist; break;
        case CostKind::absolute: c(i, j) = dist; break;
        case CostKind::sqrt_abs: c(i, j) = std::sqrt(dist); break;
      }
    }
  }
  return c;
}

std::vector<double> discretize_marginal(const std::function<double(double)>& f, int n) {
  check_cells(n);
  std::vector<double> v(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = (i + 0.5) / n;
    const double value = f(x);
    if (!std::isfinite(value) || value < 0.0)
      throw DomainError("marginal density is negative or non-finite at x = " + std::to_string(x));
    v[i] = value;
    sum += value;
  }
  if (!(sum > 0.0)) throw DomainError("marginal density vanishes at every sampled midpoint");
  const double scale = n / sum;
  for (double& value : v) value *= scale;
  return v;
}

std::pair<std::vector<double>, std::vector<double>> lorentzian_marginals(
    double m, double a, double m1, double a1, double m2, double a2, int n) {
  if (!(m > 0.0 && m1 > 0.0 && m2 > 0.0))
    throw DomainError("lorentzian slopes m, m1, m2 must be positive");
  if (!(a > 0.0 && a < 1.0 && a1 > 0.0 && a1 < 1.0 && a2 > 0.0 && a2 < 1.0))
    throw DomainError("lorentzian centers must lie in (0, 1)");
  auto mu = discretize_marginal([&](double x) { return 1.0 / (1.0 + m * (x - a) * (x - a)); }, n);
  auto nu = discretize_marginal(
      [&](double x) {
        return 1.0 / (1.0 + m1 * (x - a1) * (x - a1)) + 1.0 / (1.0 + m2 * (x - a2) * (x - a2));
      },
      n);
  return {std::move(mu), std::move(nu)};
}

double map_quantity(Quantity q, MapDirection dir, int n, double gamma, double value) {
  check_cells(n);
  if (!(gamma > 0.0)) throw DomainError("map_quantity requires gamma > 0");
  double factor = 1.0;
  switch (q) {
    case Quantity::plan: factor = gamma; break;
    case Quantity::cost: factor = 1.0; break;
    case Quantity::mu:
    case Quantity::nu: factor = static_cast<double>(n); break;
    case Quantity::alpha:
    case Quantity::beta: factor = 1.0; break;
    case Quantity::objective: factor = static_cast<double>(n) * n * gamma; break;
    case Quantity::tolerance: factor = static_cast<double>(n); break;
  }
  return dir == MapDirection::to_solver ? value * factor : value / factor;
}

}  // namespace qrot
