#ifndef QROT_NLGS_HPP
#define QROT_NLGS_HPP

#include <vector>

#include "qrot/problem.hpp"

namespace qrot {

enum class ScalarMethod { direct_search, newton };

struct NlgsConfig {
  double tolerance = 1e-6;   // on both infinity-norm marginal residuals
  int max_sweeps = 100000;
  ScalarMethod scalar_method = ScalarMethod::newton;
};

// One exact minimization of Phi over the alpha block (beta fixed):
// alpha_i solves sum_j (alpha_i + beta_j - c_ij)_+ = gamma nu_i, i.e. the
// scalar equation with breakpoints y_j = c_ij - beta_j and b = gamma nu_i.
// The row equations are decoupled, so the block update is simultaneous.
void nlgs_alpha_sweep(const Problem& p, ScalarMethod method, const std::vector<double>& beta,
                      std::vector<double>& alpha);

// Same for the beta block (alpha fixed): beta_j solves
// sum_i (alpha_i + beta_j - c_ij)_+ = gamma mu_j.
void nlgs_beta_sweep(const Problem& p, ScalarMethod method, const std::vector<double>& alpha,
                     std::vector<double>& beta);

// Alternating exact block minimization of Phi, starting from beta0
// (alpha is produced by the first half-sweep). One trace row per sweep.
// Non-convergence within max_sweeps is reported, not thrown.
SolveReport nlgs_solve(const Problem& p, std::vector<double> beta0, const NlgsConfig& cfg);

// Default start beta0 = 0.
SolveReport nlgs_solve(const Problem& p, const NlgsConfig& cfg);

}  // namespace qrot

#endif
