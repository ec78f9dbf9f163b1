#ifndef QROT_ORACLE_HPP
#define QROT_ORACLE_HPP

#include "qrot/problem.hpp"

namespace qrot {

struct OracleConfig {
  long max_cycles = 1000000;
  double tolerance = 1e-10;
};

// Independent brute-force solver for tiny instances (M*N <= 400): the
// primal problem is the Euclidean projection of -c/gamma onto
// {pi 1 = nu} n {pi^T 1 = mu} n {pi >= 0}, computed with Dykstra's
// alternating projections. Shares no code path with the dual solvers.
// Throws SolverError when the cycle budget runs out.
Matrix oracle_solve(const Problem& p, const OracleConfig& cfg = {});

}  // namespace qrot

#endif
