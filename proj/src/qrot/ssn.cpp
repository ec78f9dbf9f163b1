#include "qrot/ssn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

namespace qrot {

namespace {

void check_config(const SsnConfig& cfg) {
  if (!(cfg.epsilon > 0.0)) throw DomainError("ssn epsilon must be positive");
  if (!(cfg.theta > 0.0 && cfg.theta < 1.0)) throw DomainError("ssn theta must lie in (0, 1)");
  if (!(cfg.kappa > 0.0 && cfg.kappa < 1.0)) throw DomainError("ssn kappa must lie in (0, 1)");
  if (!(cfg.tolerance > 0.0)) throw DomainError("ssn tolerance must be positive");
  if (cfg.max_iters < 1) throw DomainError("ssn max_iters must be at least 1");
  if (!(cfg.cg_tolerance > 0.0)) throw DomainError("ssn cg_tolerance must be positive");
  if (cfg.cg_max_iters < 1) throw DomainError("ssn cg_max_iters must be at least 1");
}

// Jacobi-preconditioned conjugate gradients on (G + eps I) x = rhs,
// matrix-free. Returns the iteration count; throws on non-convergence.
int solve_cg(const NewtonMatrix& mat, const std::vector<double>& rhs, std::vector<double>& x,
             double rel_tol, int max_iters) {
  const int m = mat.pattern.rows, n = mat.pattern.cols;
  const int dim = m + n;
  x.assign(dim, 0.0);

  double rhs_norm_sq = 0.0;
  for (double v : rhs) rhs_norm_sq += v * v;
  if (rhs_norm_sq == 0.0) return 0;
  const double stop_norm_sq = rel_tol * rel_tol * rhs_norm_sq;

  std::vector<double> inv_diag(dim);
  for (int i = 0; i < m; ++i) inv_diag[i] = 1.0 / (mat.row_counts[i] + mat.epsilon);
  for (int j = 0; j < n; ++j) inv_diag[m + j] = 1.0 / (mat.col_counts[j] + mat.epsilon);

  std::vector<double> r = rhs;  // x0 = 0
  std::vector<double> z(dim), pdir(dim), ap(dim);
  for (int k = 0; k < dim; ++k) z[k] = inv_diag[k] * r[k];
  pdir = z;
  double rz = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);

  for (int it = 1; it <= max_iters; ++it) {
    apply_newton_matrix(mat, std::span(pdir.data(), m), std::span(pdir.data() + m, n),
                        std::span(ap.data(), m), std::span(ap.data() + m, n));
    const double p_ap = std::inner_product(pdir.begin(), pdir.end(), ap.begin(), 0.0);
    if (!(p_ap > 0.0)) throw SolverError("cg breakdown: non-positive curvature");
    const double step = rz / p_ap;
    double r_norm_sq = 0.0;
    for (int k = 0; k < dim; ++k) {
      x[k] += step * pdir[k];
      r[k] -= step * ap[k];
      r_norm_sq += r[k] * r[k];
    }
    if (r_norm_sq <= stop_norm_sq) return it;
    for (int k = 0; k < dim; ++k) z[k] = inv_diag[k] * r[k];
    const double rz_next = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (int k = 0; k < dim; ++k) pdir[k] = z[k] + beta * pdir[k];
  }
  throw SolverError("cg did not converge within " + std::to_string(max_iters) + " iterations");
}

// Assembles G + eps I explicitly and factors it once per step.
void solve_direct(const NewtonMatrix& mat, const std::vector<double>& rhs,
                  std::vector<double>& x) {
  const int m = mat.pattern.rows, n = mat.pattern.cols;
  const int dim = m + n;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(2 * mat.pattern.nnz() + dim);
  for (int i = 0; i < m; ++i) trip.emplace_back(i, i, mat.row_counts[i] + mat.epsilon);
  for (int j = 0; j < n; ++j) trip.emplace_back(m + j, m + j, mat.col_counts[j] + mat.epsilon);
  for (int i = 0; i < m; ++i) {
    for (int k = mat.pattern.row_ptr[i]; k < mat.pattern.row_ptr[i + 1]; ++k) {
      const int j = mat.pattern.col_idx[k];
      trip.emplace_back(i, m + j, 1.0);
      trip.emplace_back(m + j, i, 1.0);
    }
  }
  Eigen::SparseMatrix<double> a(dim, dim);
  a.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol(a);
  if (chol.info() != Eigen::Success) throw SolverError("sparse factorization of G + eps I failed");
  Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(rhs.data(), dim);
  Eigen::VectorXd sol = chol.solve(b);
  if (chol.info() != Eigen::Success) throw SolverError("sparse backsolve failed");
  x.assign(sol.data(), sol.data() + dim);
}

}  // namespace

ActivePattern assemble_active_pattern(const Problem& p, const Potentials& d) {
  if (static_cast<int>(d.alpha.size()) != p.rows() || static_cast<int>(d.beta.size()) != p.cols())
    throw DimensionError("potentials do not match problem shape");
  ActivePattern pat;
  pat.rows = p.rows();
  pat.cols = p.cols();
  pat.row_ptr.assign(pat.rows + 1, 0);
  for (int i = 0; i < pat.rows; ++i) {
    const double ai = d.alpha[i];
    for (int j = 0; j < pat.cols; ++j) {
      if (ai + d.beta[j] - p.cost(i, j) >= 0.0) pat.col_idx.push_back(j);
    }
    pat.row_ptr[i + 1] = static_cast<int>(pat.col_idx.size());
  }
  return pat;
}

NewtonMatrix make_newton_matrix(ActivePattern pattern, double epsilon) {
  NewtonMatrix m;
  m.row_counts.assign(pattern.rows, 0.0);
  m.col_counts.assign(pattern.cols, 0.0);
  for (int i = 0; i < pattern.rows; ++i) {
    m.row_counts[i] = pattern.row_ptr[i + 1] - pattern.row_ptr[i];
    for (int k = pattern.row_ptr[i]; k < pattern.row_ptr[i + 1]; ++k)
      m.col_counts[pattern.col_idx[k]] += 1.0;
  }
  m.pattern = std::move(pattern);
  m.epsilon = epsilon;
  return m;
}

void apply_newton_matrix(const NewtonMatrix& m, std::span<const double> a,
                         std::span<const double> b, std::span<double> out_a,
                         std::span<double> out_b) {
  const int rows = m.pattern.rows, cols = m.pattern.cols;
  if (static_cast<int>(a.size()) != rows || static_cast<int>(b.size()) != cols ||
      static_cast<int>(out_a.size()) != rows || static_cast<int>(out_b.size()) != cols)
    throw DimensionError("newton matrix apply: vector lengths do not match the pattern");

  for (int j = 0; j < cols; ++j) out_b[j] = (m.col_counts[j] + m.epsilon) * b[j];
  for (int i = 0; i < rows; ++i) {
    double acc = (m.row_counts[i] + m.epsilon) * a[i];
    const double ai = a[i];
    for (int k = m.pattern.row_ptr[i]; k < m.pattern.row_ptr[i + 1]; ++k) {
      const int j = m.pattern.col_idx[k];
      acc += b[j];
      out_b[j] += ai;
    }
    out_a[i] = acc;
  }
}

Potentials ssn_step(const Problem& p, const Potentials& d, const SsnConfig& cfg, StepInfo* info) {
  check_config(cfg);
  const int m = p.rows(), n = p.cols();

  const DualGradient grad = dual_gradient(p, d);
  std::vector<double> rhs(m + n);  // -F
  bool stationary = true;
  for (int i = 0; i < m; ++i) {
    rhs[i] = -grad.f1[i];
    stationary = stationary && grad.f1[i] == 0.0;
  }
  for (int j = 0; j < n; ++j) {
    rhs[m + j] = -grad.f2[j];
    stationary = stationary && grad.f2[j] == 0.0;
  }
  if (stationary) {
    if (info) *info = StepInfo{1.0, 0.0, 0};
    return d;
  }

  const NewtonMatrix mat = make_newton_matrix(assemble_active_pattern(p, d), cfg.epsilon);
  std::vector<double> s;
  int linear_iters = 0;
  if (cfg.linear_solver == LinearSolver::conjugate_gradient)
    linear_iters = solve_cg(mat, rhs, s, cfg.cg_tolerance, cfg.cg_max_iters);
  else
    solve_direct(mat, rhs, s);

  // Directional derivative D = <F, s>; equals -s^T (G + eps I) s for the
  // exact solve, hence negative.
  double dir = 0.0;
  for (int k = 0; k < m + n; ++k) dir -= rhs[k] * s[k];
  if (!(dir < 0.0)) throw SolverError("newton direction is not a descent direction");

  const double phi0 = dual_objective(p, d);
  Potentials next = d;
  double t = 1.0;
  for (;;) {
    for (int i = 0; i < m; ++i) next.alpha[i] = d.alpha[i] + t * s[i];
    for (int j = 0; j < n; ++j) next.beta[j] = d.beta[j] + t * s[m + j];
    if (dual_objective(p, next) < phi0 + t * cfg.theta * dir) break;
    t *= cfg.kappa;
    if (t < 1e-16)
      throw SolverError("armijo line search underflow: no sufficient decrease above t = 1e-16");
  }
  if (info) *info = StepInfo{t, dir, linear_iters};
  return next;
}

SolveReport ssn_solve(const Problem& p, Potentials d0, const SsnConfig& cfg) {
  p.validate();
  check_config(cfg);
  for (double v : d0.alpha)
    if (!std::isfinite(v)) throw DomainError("alpha0 contains a non-finite entry");
  for (double v : d0.beta)
    if (!std::isfinite(v)) throw DomainError("beta0 contains a non-finite entry");

  SolveReport report;
  auto record = [&](int iter, double step) {
    report.plan = plan_from_potentials(p, d0);
    const auto [res_nu, res_mu] = marginal_residuals(p, report.plan);
    report.trace.push_back({iter, dual_objective(p, d0), res_nu, res_mu, step});
    return res_nu <= cfg.tolerance && res_mu <= cfg.tolerance;
  };

  report.converged = record(0, 1.0);
  int iter = 0;
  while (!report.converged && iter < cfg.max_iters) {
    StepInfo info;
    d0 = ssn_step(p, d0, cfg, &info);
    ++iter;
    report.converged = record(iter, info.step_length);
  }
  report.potentials = std::move(d0);
  report.iterations = iter;
  return report;
}

SolveReport ssn_solve(const Problem& p, const SsnConfig& cfg) {
  return ssn_solve(p, Potentials{std::vector<double>(p.rows(), 0.0), std::vector<double>(p.cols(), 0.0)},
                   cfg);
}

}  // namespace qrot
