#include "qrot/nlgs.hpp"

#include <cmath>
#include <string>

#include "qrot/scalar_solver.hpp"

namespace qrot {

namespace {

double solve_row(std::span<const double> y, double b, ScalarMethod method) {
  const ScalarEquation eq{y, b};
  return method == ScalarMethod::direct_search ? solve_direct_search(eq) : solve_scalar_newton(eq);
}

void check_config(const NlgsConfig& cfg) {
  if (!(cfg.tolerance > 0.0)) throw DomainError("nlgs tolerance must be positive");
  if (cfg.max_sweeps < 1) throw DomainError("nlgs max_sweeps must be at least 1");
}

}  // namespace

void nlgs_alpha_sweep(const Problem& p, ScalarMethod method, const std::vector<double>& beta,
                      std::vector<double>& alpha) {
  const int m = p.rows(), n = p.cols();
  alpha.resize(m);
  std::vector<double> y(n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) y[j] = p.cost(i, j) - beta[j];
    alpha[i] = solve_row(y, p.gamma * p.nu[i], method);
  }
}

void nlgs_beta_sweep(const Problem& p, ScalarMethod method, const std::vector<double>& alpha,
                     std::vector<double>& beta) {
  const int m = p.rows(), n = p.cols();
  beta.resize(n);
  std::vector<double> y(m);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) y[i] = p.cost(i, j) - alpha[i];
    beta[j] = solve_row(y, p.gamma * p.mu[j], method);
  }
}

SolveReport nlgs_solve(const Problem& p, std::vector<double> beta0, const NlgsConfig& cfg) {
  p.validate();
  check_config(cfg);
  if (static_cast<int>(beta0.size()) != p.cols())
    throw DimensionError("beta0 has length " + std::to_string(beta0.size()) + ", expected " +
                         std::to_string(p.cols()));
  for (double b : beta0)
    if (!std::isfinite(b)) throw DomainError("beta0 contains a non-finite entry");

  Potentials d{std::vector<double>(p.rows(), 0.0), std::move(beta0)};

  SolveReport report;
  auto record = [&](int sweep) {
    report.plan = plan_from_potentials(p, d);
    const auto [res_nu, res_mu] = marginal_residuals(p, report.plan);
    report.trace.push_back({sweep, dual_objective(p, d), res_nu, res_mu, 1.0});
    return res_nu <= cfg.tolerance && res_mu <= cfg.tolerance;
  };

  report.converged = record(0);
  int sweep = 0;
  while (!report.converged && sweep < cfg.max_sweeps) {
    nlgs_alpha_sweep(p, cfg.scalar_method, d.beta, d.alpha);
    nlgs_beta_sweep(p, cfg.scalar_method, d.alpha, d.beta);
    ++sweep;
    report.converged = record(sweep);
  }
  report.potentials = std::move(d);
  report.iterations = sweep;
  return report;
}

SolveReport nlgs_solve(const Problem& p, const NlgsConfig& cfg) {
  return nlgs_solve(p, std::vector<double>(p.cols(), 0.0), cfg);
}

}  // namespace qrot
