#ifndef QROT_PROBLEM_HPP
#define QROT_PROBLEM_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "qrot/errors.hpp"

namespace qrot {

// Dense row-major matrix.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0)
      : rows(r), cols(c), data(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), fill) {}

  double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
};

// Data of the regularized transport problem
//
//   min  <pi, c> + gamma/2 ||pi||_F^2   s.t.  pi 1 = nu,  pi^T 1 = mu,  pi >= 0
//
// with cost c of shape M x N, row marginal nu (length M), column marginal
// mu (length N) and gamma > 0. Marginals must be strictly positive and
// mass-balanced; validate() enforces this.
struct Problem {
  Matrix cost;
  std::vector<double> mu;   // length N, column sums of pi
  std::vector<double> nu;   // length M, row sums of pi
  double gamma = 1.0;

  int rows() const { return cost.rows; }  // M
  int cols() const { return cost.cols; }  // N

  // Throws DimensionError/DomainError when the invariants fail.
  void validate() const;
};

// Dual variables: alpha (length M) pairs with the row constraints,
// beta (length N) with the column constraints.
struct Potentials {
  std::vector<double> alpha;
  std::vector<double> beta;
};

struct PlanEntry {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

// Sparse nonnegative plan. Entries are strictly positive, unique, and
// sorted row-major; absent entries are exactly zero.
struct Plan {
  int rows = 0;
  int cols = 0;
  std::vector<PlanEntry> entries;

  std::size_t nnz() const { return entries.size(); }
  std::vector<double> row_sums() const;
  std::vector<double> col_sums() const;
  Matrix dense() const;
};

struct TraceRow {
  int iteration = 0;
  double phi = 0.0;
  double residual_nu = 0.0;  // ||pi 1 - nu||_inf
  double residual_mu = 0.0;  // ||pi^T 1 - mu||_inf
  double step_length = 1.0;
};

struct SolveReport {
  Plan plan;
  Potentials potentials;
  std::vector<TraceRow> trace;  // trace.size() == iterations + 1
  bool converged = false;
  int iterations = 0;
};

// pi_ij = max(alpha_i + beta_j - c_ij, 0) / gamma; zeros are not stored.
Plan plan_from_potentials(const Problem& p, const Potentials& d);

// <pi, c> + gamma/2 ||pi||_F^2
double primal_objective(const Problem& p, const Plan& plan);

// Phi(alpha, beta) = 1/2 ||(alpha (+) beta - c)_+||_F^2
//                    - gamma <nu, alpha> - gamma <mu, beta>
double dual_objective(const Problem& p, const Potentials& d);

// Gradient of Phi: f1_i = sum_j (alpha_i + beta_j - c_ij)_+ - gamma nu_i,
//                  f2_j = sum_i (alpha_i + beta_j - c_ij)_+ - gamma mu_j.
struct DualGradient {
  std::vector<double> f1;  // length M
  std::vector<double> f2;  // length N
};
DualGradient dual_gradient(const Problem& p, const Potentials& d);

// (||pi 1 - nu||_inf, ||pi^T 1 - mu||_inf)
std::pair<double, double> marginal_residuals(const Problem& p, const Plan& plan);

// Phi(alpha, beta) + gamma * E(plan_from_potentials(p, d)); zero exactly
// at solutions of the optimality system. Diagnostic only, not a
// termination criterion.
double duality_gap(const Problem& p, const Potentials& d);

// Shifts (alpha + C, beta - C) with C = mean(beta) so that sum(beta) = 0.
// Leaves plan_from_potentials unchanged.
Potentials normalize_gauge(const Potentials& d);

}  // namespace qrot

#endif
