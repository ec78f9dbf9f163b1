#include "qrot/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qrot {

Matrix oracle_solve(const Problem& p, const OracleConfig& cfg) {
  p.validate();
  if (!(cfg.tolerance > 0.0)) throw DomainError("oracle tolerance must be positive");
  if (cfg.max_cycles < 1) throw DomainError("oracle max_cycles must be at least 1");
  const int m = p.rows(), n = p.cols();
  if (static_cast<long>(m) * n > 400)
    throw DomainError("oracle is restricted to M*N <= 400; got " + std::to_string(m) + " x " +
                      std::to_string(n));

  // Projection target -c/gamma; Dykstra needs one correction per set.
  Matrix x(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) x(i, j) = -p.cost(i, j) / p.gamma;
  Matrix corr_row(m, n, 0.0), corr_col(m, n, 0.0), corr_pos(m, n, 0.0);
  Matrix prev(m, n, 0.0);

  for (long cycle = 1; cycle <= cfg.max_cycles; ++cycle) {
    prev = x;

    // {row sums = nu}: shift each row by the mean defect.
    for (int i = 0; i < m; ++i) {
      double rs = 0.0;
      for (int j = 0; j < n; ++j) {
        x(i, j) += corr_row(i, j);
        rs += x(i, j);
      }
      const double shift = (p.nu[i] - rs) / n;
      for (int j = 0; j < n; ++j) {
        const double y = x(i, j);
        x(i, j) = y + shift;
        corr_row(i, j) = y - x(i, j);
      }
    }

    // {column sums = mu}.
    for (int j = 0; j < n; ++j) {
      double cs = 0.0;
      for (int i = 0; i < m; ++i) {
        x(i, j) += corr_col(i, j);
        cs += x(i, j);
      }
      const double shift = (p.mu[j] - cs) / m;
      for (int i = 0; i < m; ++i) {
        const double y = x(i, j);
        x(i, j) = y + shift;
        corr_col(i, j) = y - x(i, j);
      }
    }

    // {pi >= 0}: entrywise clamp, last so the cycle ends nonnegative.
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        const double y = x(i, j) + corr_pos(i, j);
        x(i, j) = std::max(y, 0.0);
        corr_pos(i, j) = y - x(i, j);
      }

    double res = 0.0, change = 0.0;
    for (int i = 0; i < m; ++i) {
      double rs = 0.0;
      for (int j = 0; j < n; ++j) {
        rs += x(i, j);
        change = std::max(change, std::abs(x(i, j) - prev(i, j)));
      }
      res = std::max(res, std::abs(rs - p.nu[i]));
    }
    for (int j = 0; j < n; ++j) {
      double cs = 0.0;
      for (int i = 0; i < m; ++i) cs += x(i, j);
      res = std::max(res, std::abs(cs - p.mu[j]));
    }
    if (res <= cfg.tolerance && change <= cfg.tolerance) return x;
  }
  throw SolverError("oracle: Dykstra cycles exhausted (" + std::to_string(cfg.max_cycles) +
                    ") before reaching tolerance");
}

}  // namespace qrot
