#include "qrot/problem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace qrot {

namespace {

constexpr double kMassBalanceRel = 1e-12;

void check_dims(const Problem& p, const Potentials& d) {
  if (static_cast<int>(d.alpha.size()) != p.rows() || static_cast<int>(d.beta.size()) != p.cols()) {
    throw DimensionError("potentials do not match problem: |alpha| = " +
                         std::to_string(d.alpha.size()) + ", |beta| = " +
                         std::to_string(d.beta.size()) + ", problem is " +
                         std::to_string(p.rows()) + " x " + std::to_string(p.cols()));
  }
}

void check_dims(const Problem& p, const Plan& plan) {
  if (plan.rows != p.rows() || plan.cols != p.cols()) {
    throw DimensionError("plan shape " + std::to_string(plan.rows) + " x " +
                         std::to_string(plan.cols) + " does not match problem " +
                         std::to_string(p.rows()) + " x " + std::to_string(p.cols()));
  }
}

}  // namespace

void Problem::validate() const {
  const int m = rows();
  const int n = cols();
  if (m < 1 || n < 1) throw DimensionError("problem must have at least one row and column");
  if (cost.data.size() != static_cast<std::size_t>(m) * n)
    throw DimensionError("cost storage does not match its declared shape");
  if (static_cast<int>(nu.size()) != m)
    throw DimensionError("|nu| = " + std::to_string(nu.size()) + ", expected M = " + std::to_string(m));
  if (static_cast<int>(mu.size()) != n)
    throw DimensionError("|mu| = " + std::to_string(mu.size()) + ", expected N = " + std::to_string(n));
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw DomainError("gamma must be positive, got " + std::to_string(gamma));
  for (double c : cost.data)
    if (!std::isfinite(c)) throw DomainError("cost contains a non-finite entry");

  double sum_mu = 0.0, sum_nu = 0.0;
  for (std::size_t j = 0; j < mu.size(); ++j) {
    if (!(mu[j] > 0.0) || !std::isfinite(mu[j]))
      throw DomainError("mu[" + std::to_string(j) + "] = " + std::to_string(mu[j]) +
                        " is not strictly positive");
    sum_mu += mu[j];
  }
  for (std::size_t i = 0; i < nu.size(); ++i) {
    if (!(nu[i] > 0.0) || !std::isfinite(nu[i]))
      throw DomainError("nu[" + std::to_string(i) + "] = " + std::to_string(nu[i]) +
                        " is not strictly positive");
    sum_nu += nu[i];
  }
  const double scale = std::max(sum_mu, sum_nu);
  if (std::abs(sum_mu - sum_nu) > kMassBalanceRel * scale) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "marginal masses differ: sum(mu) = %.17g, sum(nu) = %.17g (tolerance %.3g)",
                  sum_mu, sum_nu, kMassBalanceRel * scale);
    throw DomainError(buf);
  }
}

std::vector<double> Plan::row_sums() const {
  std::vector<double> s(rows, 0.0);
  for (const auto& e : entries) s[e.row] += e.value;
  return s;
}

std::vector<double> Plan::col_sums() const {
  std::vector<double> s(cols, 0.0);
  for (const auto& e : entries) s[e.col] += e.value;
  return s;
}

Matrix Plan::dense() const {
  Matrix m(rows, cols, 0.0);
  for (const auto& e : entries) m(e.row, e.col) = e.value;
  return m;
}

Plan plan_from_potentials(const Problem& p, const Potentials& d) {
  check_dims(p, d);
  Plan plan;
  plan.rows = p.rows();
  plan.cols = p.cols();
  const double inv_gamma = 1.0 / p.gamma;
  for (int i = 0; i < p.rows(); ++i) {
    const double ai = d.alpha[i];
    for (int j = 0; j < p.cols(); ++j) {
      const double v = ai + d.beta[j] - p.cost(i, j);
      if (v > 0.0) plan.entries.push_back({i, j, v * inv_gamma});
    }
  }
  return plan;
}

double primal_objective(const Problem& p, const Plan& plan) {
  check_dims(p, plan);
  double transport = 0.0, norm_sq = 0.0;
  for (const auto& e : plan.entries) {
    transport += p.cost(e.row, e.col) * e.value;
    norm_sq += e.value * e.value;
  }
  return transport + 0.5 * p.gamma * norm_sq;
}

double dual_objective(const Problem& p, const Potentials& d) {
  check_dims(p, d);
  double half_sq = 0.0;
  for (int i = 0; i < p.rows(); ++i) {
    const double ai = d.alpha[i];
    for (int j = 0; j < p.cols(); ++j) {
      const double v = ai + d.beta[j] - p.cost(i, j);
      if (v > 0.0) half_sq += v * v;
    }
  }
  double pair_nu = 0.0, pair_mu = 0.0;
  for (int i = 0; i < p.rows(); ++i) pair_nu += p.nu[i] * d.alpha[i];
  for (int j = 0; j < p.cols(); ++j) pair_mu += p.mu[j] * d.beta[j];
  return 0.5 * half_sq - p.gamma * pair_nu - p.gamma * pair_mu;
}

DualGradient dual_gradient(const Problem& p, const Potentials& d) {
  check_dims(p, d);
  DualGradient g;
  g.f1.assign(p.rows(), 0.0);
  g.f2.assign(p.cols(), 0.0);
  for (int i = 0; i < p.rows(); ++i) {
    const double ai = d.alpha[i];
    double row = 0.0;
    for (int j = 0; j < p.cols(); ++j) {
      const double v = ai + d.beta[j] - p.cost(i, j);
      if (v > 0.0) {
        row += v;
        g.f2[j] += v;
      }
    }
    g.f1[i] = row - p.gamma * p.nu[i];
  }
  for (int j = 0; j < p.cols(); ++j) g.f2[j] -= p.gamma * p.mu[j];
  return g;
}

std::pair<double, double> marginal_residuals(const Problem& p, const Plan& plan) {
  check_dims(p, plan);
  const auto rs = plan.row_sums();
  const auto cs = plan.col_sums();
  double res_nu = 0.0, res_mu = 0.0;
  for (int i = 0; i < p.rows(); ++i) res_nu = std::max(res_nu, std::abs(rs[i] - p.nu[i]));
  for (int j = 0; j < p.cols(); ++j) res_mu = std::max(res_mu, std::abs(cs[j] - p.mu[j]));
  return {res_nu, res_mu};
}

double duality_gap(const Problem& p, const Potentials& d) {
  return dual_objective(p, d) + p.gamma * primal_objective(p, plan_from_potentials(p, d));
}

Potentials normalize_gauge(const Potentials& d) {
  Potentials out = d;
  if (out.beta.empty()) return out;
  double mean = 0.0;
  for (double b : out.beta) mean += b;
  mean /= static_cast<double>(out.beta.size());
  for (double& a : out.alpha) a += mean;
  for (double& b : out.beta) b -= mean;
  return out;
}

}  // namespace qrot
