#ifndef QROT_GRID_HPP
#define QROT_GRID_HPP

#include <functional>
#include <utility>
#include <vector>

#include "qrot/problem.hpp"

namespace qrot {

// Piecewise-constant discretization of [0,1] into n equal cells.
// Cell i covers (i/n, (i+1)/n) with midpoint (i + 0.5)/n.

enum class CostKind { squared, absolute, sqrt_abs };

// Exact cell average of (x - y)^2: c_ij = ((i - j)^2 + 1/6) / n^2.
Matrix squared_cost_coefficients(int n);

// kind(|m_i - m_j|) evaluated at cell midpoints. For the squared kind this
// misses exactly the 1/(6 n^2) variance term of the exact average.
Matrix midpoint_cost_coefficients(int n, CostKind kind);

// Midpoint-rule cell averages of f >= 0, rescaled so the coefficient
// vector sums to n (unit mass in the continuous normalization).
// Throws DomainError if f is negative at a sampled midpoint.
std::vector<double> discretize_marginal(const std::function<double(double)>& f, int n);

// mu(x) = 1 / (1 + m (x - a)^2),
// nu(x) = 1 / (1 + m1 (x - a1)^2) + 1 / (1 + m2 (x - a2)^2),
// both discretized and normalized to sum n. Overall amplitude factors are
// absorbed by the normalization.
std::pair<std::vector<double>, std::vector<double>> lorentzian_marginals(
    double m, double a, double m1, double a1, double m2, double a2, int n);

// Conversion between discretization coefficients and solver quantities:
// plan x gamma, cost x 1, mu/nu x n, alpha/beta x 1, objective x n^2 gamma,
// tolerance x n (to_solver direction; from_solver inverts).
enum class Quantity { plan, cost, mu, nu, alpha, beta, objective, tolerance };
enum class MapDirection { to_solver, from_solver };

double map_quantity(Quantity q, MapDirection dir, int n, double gamma, double value);

}  // namespace qrot

#endif
