#ifndef QROT_SSN_HPP
#define QROT_SSN_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "qrot/problem.hpp"

namespace qrot {

// Indicator sigma_ij = 1 iff alpha_i + beta_j - c_ij >= 0 (ties at zero
// are active), stored row-compressed. support(pi) is contained in the
// pattern since plan entries require strict positivity.
struct ActivePattern {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_ptr;  // size rows + 1
  std::vector<int> col_idx;  // active columns per row, ascending

  std::size_t nnz() const { return col_idx.size(); }
};

ActivePattern assemble_active_pattern(const Problem& p, const Potentials& d);

// The regularized Newton derivative
//
//   G + eps I,   G = [ diag(sigma 1)   sigma          ]
//                    [ sigma^T         diag(sigma^T 1) ]
//
// kept matrix-free: only the pattern and its row/column counts are stored.
// G is symmetric positive semi-definite with
// (a,b)^T G (a,b) = sum_ij sigma_ij (a_i + b_j)^2.
struct NewtonMatrix {
  ActivePattern pattern;
  std::vector<double> row_counts;  // sigma 1_N
  std::vector<double> col_counts;  // sigma^T 1_M
  double epsilon = 0.0;
};

NewtonMatrix make_newton_matrix(ActivePattern pattern, double epsilon);

// (out_a, out_b) = (G + eps I), applied to (a, b).
void apply_newton_matrix(const NewtonMatrix& m, std::span<const double> a,
                         std::span<const double> b, std::span<double> out_a,
                         std::span<double> out_b);

enum class LinearSolver { conjugate_gradient, direct_sparse };

struct SsnConfig {
  double epsilon = 1e-6;  // Newton matrix regularization
  double theta = 0.1;     // Armijo slope factor
  double kappa = 0.5;     // backtracking factor
  double tolerance = 1e-6;
  int max_iters = 500;
  LinearSolver linear_solver = LinearSolver::conjugate_gradient;
  double cg_tolerance = 1e-10;  // relative residual reduction
  int cg_max_iters = 10000;
};

struct StepInfo {
  double step_length = 1.0;             // accepted Armijo step t
  double directional_derivative = 0.0;  // D = <F, s>, negative unless F = 0
  int linear_iterations = 0;            // CG iterations (0 for the direct path)
};

// One globalized Newton step: solve (G + eps I) s = -F, then backtrack
// t = 1, kappa, kappa^2, ... until Phi(d + t s) < Phi(d) + t theta D.
// At a point with F = 0 the potentials are returned unchanged.
// Throws SolverError when the linear solve fails or t underflows 1e-16.
Potentials ssn_step(const Problem& p, const Potentials& d, const SsnConfig& cfg,
                    StepInfo* info = nullptr);

// Full Algorithm: iterate ssn_step until both marginal residuals of
// plan_from_potentials fall below cfg.tolerance, or max_iters is reached.
SolveReport ssn_solve(const Problem& p, Potentials d0, const SsnConfig& cfg);

// Default start alpha0 = 0, beta0 = 0.
SolveReport ssn_solve(const Problem& p, const SsnConfig& cfg);

}  // namespace qrot

#endif
