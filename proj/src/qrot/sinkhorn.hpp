#ifndef QROT_SINKHORN_HPP
#define QROT_SINKHORN_HPP

#include "qrot/problem.hpp"

namespace qrot {

struct SinkhornConfig {
  double gamma_ent = 0.05;  // entropic regularization strength
  double tolerance = 1e-6;
  int max_iters = 100000;
};

struct SinkhornReport {
  int iterations = 0;
  double residual_nu = 0.0;
  double residual_mu = 0.0;
  bool converged = false;
};

// Naive Sinkhorn scaling for entropically regularized transport on the
// problem's (c, mu, nu); the quadratic gamma field is ignored. Kernel
// K_ij = exp(-c_ij / gamma_ent), iterates u <- nu / (K v), v <- mu / (K^T u)
// from v0 = 1, plan pi = diag(u) K diag(v). Deliberately without
// log-domain stabilization: kernel underflow or non-finite scalings raise
// StabilityError.
Matrix sinkhorn_solve(const Problem& p, const SinkhornConfig& cfg, SinkhornReport* report = nullptr);

}  // namespace qrot

#endif
