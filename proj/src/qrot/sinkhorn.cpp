#include "qrot/sinkhorn.hpp"

#include <algorithm>
#include <cmath>

namespace qrot {

namespace {

void check_config(const SinkhornConfig& cfg) {
  if (!(cfg.gamma_ent > 0.0)) throw DomainError("sinkhorn gamma_ent must be positive");
  if (!(cfg.tolerance > 0.0)) throw DomainError("sinkhorn tolerance must be positive");
  if (cfg.max_iters < 1) throw DomainError("sinkhorn max_iters must be at least 1");
}

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

Matrix sinkhorn_solve(const Problem& p, const SinkhornConfig& cfg, SinkhornReport* report) {
  p.validate();
  check_config(cfg);
  const int m = p.rows(), n = p.cols();

  Matrix kernel(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      const double k = std::exp(-p.cost(i, j) / cfg.gamma_ent);
      if (k == 0.0)
        throw StabilityError("sinkhorn kernel underflow: exp(-c/gamma) vanished at (" +
                             std::to_string(i) + ", " + std::to_string(j) +
                             "); gamma_ent is too small for this cost");
      kernel(i, j) = k;
    }

  std::vector<double> u(m, 1.0), v(n, 1.0);
  std::vector<double> kv(m), ktu(n);
  auto mul_kv = [&] {
    for (int i = 0; i < m; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += kernel(i, j) * v[j];
      kv[i] = acc;
    }
  };
  auto mul_ktu = [&] {
    std::fill(ktu.begin(), ktu.end(), 0.0);
    for (int i = 0; i < m; ++i) {
      const double ui = u[i];
      for (int j = 0; j < n; ++j) ktu[j] += kernel(i, j) * ui;
    }
  };

  SinkhornReport rep;
  mul_kv();
  for (int it = 1; it <= cfg.max_iters; ++it) {
    for (int i = 0; i < m; ++i) u[i] = p.nu[i] / kv[i];
    mul_ktu();
    for (int j = 0; j < n; ++j) v[j] = p.mu[j] / ktu[j];
    if (!all_finite(u) || !all_finite(v))
      throw StabilityError("sinkhorn scaling vectors became non-finite at iteration " +
                           std::to_string(it));
    rep.iterations = it;

    // After the v update the column sums match mu exactly, so the row-side
    // residual u o (K v) - nu carries the convergence information.
    mul_kv();
    double res_nu = 0.0;
    for (int i = 0; i < m; ++i) res_nu = std::max(res_nu, std::abs(u[i] * kv[i] - p.nu[i]));
    if (res_nu <= cfg.tolerance) {
      rep.converged = true;
      break;
    }
  }

  Matrix plan(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) plan(i, j) = u[i] * kernel(i, j) * v[j];

  // Full two-sided check on the assembled plan.
  double res_nu = 0.0, res_mu = 0.0;
  for (int i = 0; i < m; ++i) {
    double rs = 0.0;
    for (int j = 0; j < n; ++j) rs += plan(i, j);
    res_nu = std::max(res_nu, std::abs(rs - p.nu[i]));
  }
  for (int j = 0; j < n; ++j) {
    double cs = 0.0;
    for (int i = 0; i < m; ++i) cs += plan(i, j);
    res_mu = std::max(res_mu, std::abs(cs - p.mu[j]));
  }
  rep.residual_nu = res_nu;
  rep.residual_mu = res_mu;
  rep.converged = rep.converged && res_nu <= cfg.tolerance && res_mu <= cfg.tolerance;
  if (report) *report = rep;
  return plan;
}

}  // namespace qrot
