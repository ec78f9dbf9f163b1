#include "qrot.h"

#include <cstring>
#include <exception>
#include <string>
#include <vector>

#include "qrot/errors.hpp"
#include "qrot/grid.hpp"
#include "qrot/nlgs.hpp"
#include "qrot/problem.hpp"
#include "qrot/scalar_solver.hpp"
#include "qrot/sinkhorn.hpp"
#include "qrot/ssn.hpp"

struct qrot_problem {
  qrot::Problem impl;
};

struct qrot_result {
  int64_t rows = 0;
  int64_t cols = 0;
  bool has_potentials = false;  // false for sinkhorn results
  qrot::SolveReport report;     // sinkhorn: plan/trace via fields below
  double duality_gap = 0.0;
  double final_phi = 0.0;
  double residual_nu = 0.0;
  double residual_mu = 0.0;
};

namespace {

thread_local std::string g_last_error;

void set_error(const char* what) { g_last_error = what ? what : ""; }

qrot_status translate(const std::exception_ptr& eptr) {
  try {
    std::rethrow_exception(eptr);
  } catch (const qrot::DimensionError& e) {
    set_error(e.what());
    return QROT_ERR_DIMENSION;
  } catch (const qrot::DomainError& e) {
    set_error(e.what());
    return QROT_ERR_DOMAIN;
  } catch (const qrot::StabilityError& e) {
    set_error(e.what());
    return QROT_ERR_STABILITY;
  } catch (const qrot::SolverError& e) {
    set_error(e.what());
    return QROT_ERR_SOLVER;
  } catch (const std::exception& e) {
    set_error(e.what());
    return QROT_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown error");
    return QROT_ERR_INTERNAL;
  }
}

template <typename Fn>
qrot_status guarded(Fn&& fn) {
  try {
    fn();
    return QROT_OK;
  } catch (...) {
    return translate(std::current_exception());
  }
}

qrot_status invalid_arg(const char* message) {
  set_error(message);
  return QROT_ERR_INVALID_ARG;
}

// Sparsifies a dense plan; only strictly positive entries are kept.
qrot::Plan sparsify(const qrot::Matrix& dense) {
  qrot::Plan plan;
  plan.rows = dense.rows;
  plan.cols = dense.cols;
  for (int i = 0; i < dense.rows; ++i)
    for (int j = 0; j < dense.cols; ++j)
      if (dense(i, j) > 0.0) plan.entries.push_back({i, j, dense(i, j)});
  return plan;
}

qrot_result* finish_result(const qrot::Problem& p, qrot::SolveReport&& report) {
  auto* res = new qrot_result;
  res->rows = p.rows();
  res->cols = p.cols();
  res->has_potentials = true;
  res->duality_gap = qrot::duality_gap(p, report.potentials);
  res->final_phi = report.trace.back().phi;
  res->residual_nu = report.trace.back().residual_nu;
  res->residual_mu = report.trace.back().residual_mu;
  res->report = std::move(report);
  return res;
}

}  // namespace

extern "C" {

const char* qrot_version(void) { return "0.1.0"; }

const char* qrot_status_name(qrot_status status) {
  switch (status) {
    case QROT_OK: return "ok";
    case QROT_ERR_INVALID_ARG: return "invalid argument";
    case QROT_ERR_DIMENSION: return "dimension mismatch";
    case QROT_ERR_DOMAIN: return "domain error";
    case QROT_ERR_SOLVER: return "solver failure";
    case QROT_ERR_STABILITY: return "numerical instability";
    case QROT_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* qrot_last_error(void) { return g_last_error.c_str(); }

qrot_status qrot_problem_create(int64_t rows, int64_t cols, const double* cost, const double* mu,
                                const double* nu, double gamma, qrot_problem** out) {
  if (!out) return invalid_arg("qrot_problem_create: out is null");
  *out = nullptr;
  if (!cost || !mu || !nu) return invalid_arg("qrot_problem_create: null data pointer");
  if (rows < 1 || cols < 1) return invalid_arg("qrot_problem_create: rows and cols must be >= 1");
  return guarded([&] {
    qrot::Problem p;
    p.cost.rows = static_cast<int>(rows);
    p.cost.cols = static_cast<int>(cols);
    p.cost.data.assign(cost, cost + rows * cols);
    p.mu.assign(mu, mu + cols);
    p.nu.assign(nu, nu + rows);
    p.gamma = gamma;
    p.validate();
    *out = new qrot_problem{std::move(p)};
  });
}

void qrot_problem_destroy(qrot_problem* problem) { delete problem; }

qrot_status qrot_problem_dims(const qrot_problem* problem, int64_t* rows, int64_t* cols) {
  if (!problem) return invalid_arg("qrot_problem_dims: null problem");
  if (rows) *rows = problem->impl.rows();
  if (cols) *cols = problem->impl.cols();
  return QROT_OK;
}

void qrot_nlgs_options_init(qrot_nlgs_options* opts) {
  if (!opts) return;
  const qrot::NlgsConfig defaults;
  opts->tolerance = defaults.tolerance;
  opts->max_sweeps = defaults.max_sweeps;
  opts->scalar_method = defaults.scalar_method == qrot::ScalarMethod::direct_search
                            ? QROT_SCALAR_DIRECT_SEARCH
                            : QROT_SCALAR_NEWTON;
}

void qrot_ssn_options_init(qrot_ssn_options* opts) {
  if (!opts) return;
  const qrot::SsnConfig defaults;
  opts->epsilon = defaults.epsilon;
  opts->theta = defaults.theta;
  opts->kappa = defaults.kappa;
  opts->tolerance = defaults.tolerance;
  opts->max_iters = defaults.max_iters;
  opts->linear_solver = defaults.linear_solver == qrot::LinearSolver::conjugate_gradient
                            ? QROT_LINEAR_CG
                            : QROT_LINEAR_DIRECT;
  opts->cg_tolerance = defaults.cg_tolerance;
  opts->cg_max_iters = defaults.cg_max_iters;
}

void qrot_sinkhorn_options_init(qrot_sinkhorn_options* opts) {
  if (!opts) return;
  const qrot::SinkhornConfig defaults;
  opts->gamma_ent = defaults.gamma_ent;
  opts->tolerance = defaults.tolerance;
  opts->max_iters = defaults.max_iters;
}

qrot_status qrot_solve_ssn(const qrot_problem* problem, const qrot_ssn_options* opts,
                           qrot_result** out) {
  if (!out) return invalid_arg("qrot_solve_ssn: out is null");
  *out = nullptr;
  if (!problem) return invalid_arg("qrot_solve_ssn: null problem");
  qrot::SsnConfig cfg;
  if (opts) {
    cfg.epsilon = opts->epsilon;
    cfg.theta = opts->theta;
    cfg.kappa = opts->kappa;
    cfg.tolerance = opts->tolerance;
    cfg.max_iters = static_cast<int>(opts->max_iters);
    if (opts->linear_solver != QROT_LINEAR_CG && opts->linear_solver != QROT_LINEAR_DIRECT)
      return invalid_arg("qrot_solve_ssn: unknown linear solver");
    cfg.linear_solver = opts->linear_solver == QROT_LINEAR_CG
                            ? qrot::LinearSolver::conjugate_gradient
                            : qrot::LinearSolver::direct_sparse;
    cfg.cg_tolerance = opts->cg_tolerance;
    cfg.cg_max_iters = static_cast<int>(opts->cg_max_iters);
  }
  return guarded([&] { *out = finish_result(problem->impl, qrot::ssn_solve(problem->impl, cfg)); });
}

qrot_status qrot_solve_nlgs(const qrot_problem* problem, const qrot_nlgs_options* opts,
                            qrot_result** out) {
  if (!out) return invalid_arg("qrot_solve_nlgs: out is null");
  *out = nullptr;
  if (!problem) return invalid_arg("qrot_solve_nlgs: null problem");
  qrot::NlgsConfig cfg;
  if (opts) {
    cfg.tolerance = opts->tolerance;
    cfg.max_sweeps = static_cast<int>(opts->max_sweeps);
    if (opts->scalar_method != QROT_SCALAR_DIRECT_SEARCH &&
        opts->scalar_method != QROT_SCALAR_NEWTON)
      return invalid_arg("qrot_solve_nlgs: unknown scalar method");
    cfg.scalar_method = opts->scalar_method == QROT_SCALAR_DIRECT_SEARCH
                            ? qrot::ScalarMethod::direct_search
                            : qrot::ScalarMethod::newton;
  }
  return guarded([&] { *out = finish_result(problem->impl, qrot::nlgs_solve(problem->impl, cfg)); });
}

qrot_status qrot_solve_sinkhorn(const qrot_problem* problem, const qrot_sinkhorn_options* opts,
                                qrot_result** out) {
  if (!out) return invalid_arg("qrot_solve_sinkhorn: out is null");
  *out = nullptr;
  if (!problem) return invalid_arg("qrot_solve_sinkhorn: null problem");
  qrot::SinkhornConfig cfg;
  if (opts) {
    cfg.gamma_ent = opts->gamma_ent;
    cfg.tolerance = opts->tolerance;
    cfg.max_iters = static_cast<int>(opts->max_iters);
  }
  return guarded([&] {
    qrot::SinkhornReport rep;
    qrot::Matrix plan = qrot::sinkhorn_solve(problem->impl, cfg, &rep);
    auto* res = new qrot_result;
    res->rows = problem->impl.rows();
    res->cols = problem->impl.cols();
    res->has_potentials = false;
    res->report.plan = sparsify(plan);
    res->report.converged = rep.converged;
    res->report.iterations = rep.iterations;
    res->residual_nu = rep.residual_nu;
    res->residual_mu = rep.residual_mu;
    *out = res;
  });
}

void qrot_result_destroy(qrot_result* result) { delete result; }

int qrot_result_converged(const qrot_result* result) {
  return result && result->report.converged ? 1 : 0;
}

int64_t qrot_result_iterations(const qrot_result* result) {
  return result ? result->report.iterations : -1;
}

int64_t qrot_result_plan_nnz(const qrot_result* result) {
  return result ? static_cast<int64_t>(result->report.plan.nnz()) : -1;
}

qrot_status qrot_result_plan_triplets(const qrot_result* result, int64_t* rows, int64_t* cols,
                                      double* values) {
  if (!result) return invalid_arg("qrot_result_plan_triplets: null result");
  if (!rows || !cols || !values) return invalid_arg("qrot_result_plan_triplets: null buffer");
  const auto& entries = result->report.plan.entries;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    rows[k] = entries[k].row;
    cols[k] = entries[k].col;
    values[k] = entries[k].value;
  }
  return QROT_OK;
}

qrot_status qrot_result_plan_dense(const qrot_result* result, double* plan) {
  if (!result) return invalid_arg("qrot_result_plan_dense: null result");
  if (!plan) return invalid_arg("qrot_result_plan_dense: null buffer");
  std::memset(plan, 0, sizeof(double) * static_cast<std::size_t>(result->rows * result->cols));
  for (const auto& e : result->report.plan.entries)
    plan[static_cast<std::size_t>(e.row) * result->cols + e.col] = e.value;
  return QROT_OK;
}

qrot_status qrot_result_potentials(const qrot_result* result, double* alpha, double* beta) {
  if (!result) return invalid_arg("qrot_result_potentials: null result");
  if (!result->has_potentials)
    return invalid_arg("qrot_result_potentials: sinkhorn results carry no dual potentials");
  if (!alpha || !beta) return invalid_arg("qrot_result_potentials: null buffer");
  const auto& d = result->report.potentials;
  std::memcpy(alpha, d.alpha.data(), sizeof(double) * d.alpha.size());
  std::memcpy(beta, d.beta.data(), sizeof(double) * d.beta.size());
  return QROT_OK;
}

int64_t qrot_result_trace_size(const qrot_result* result) {
  return result ? static_cast<int64_t>(result->report.trace.size()) : -1;
}

qrot_status qrot_result_trace(const qrot_result* result, int64_t* iteration, double* phi,
                              double* residual_nu, double* residual_mu, double* step_length) {
  if (!result) return invalid_arg("qrot_result_trace: null result");
  const auto& trace = result->report.trace;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    if (iteration) iteration[k] = trace[k].iteration;
    if (phi) phi[k] = trace[k].phi;
    if (residual_nu) residual_nu[k] = trace[k].residual_nu;
    if (residual_mu) residual_mu[k] = trace[k].residual_mu;
    if (step_length) step_length[k] = trace[k].step_length;
  }
  return QROT_OK;
}

qrot_status qrot_result_residuals(const qrot_result* result, double* residual_nu,
                                  double* residual_mu) {
  if (!result) return invalid_arg("qrot_result_residuals: null result");
  if (residual_nu) *residual_nu = result->residual_nu;
  if (residual_mu) *residual_mu = result->residual_mu;
  return QROT_OK;
}

qrot_status qrot_result_objective(const qrot_result* result, double* phi) {
  if (!result || !phi) return invalid_arg("qrot_result_objective: null argument");
  if (!result->has_potentials)
    return invalid_arg("qrot_result_objective: sinkhorn results have no dual objective");
  *phi = result->final_phi;
  return QROT_OK;
}

qrot_status qrot_result_duality_gap(const qrot_result* result, double* gap) {
  if (!result || !gap) return invalid_arg("qrot_result_duality_gap: null argument");
  if (!result->has_potentials)
    return invalid_arg("qrot_result_duality_gap: sinkhorn results have no duality gap");
  *gap = result->duality_gap;
  return QROT_OK;
}

qrot_status qrot_dual_objective(const qrot_problem* problem, const double* alpha,
                                const double* beta, double* out) {
  if (!problem || !alpha || !beta || !out) return invalid_arg("qrot_dual_objective: null argument");
  return guarded([&] {
    qrot::Potentials d{std::vector<double>(alpha, alpha + problem->impl.rows()),
                       std::vector<double>(beta, beta + problem->impl.cols())};
    *out = qrot::dual_objective(problem->impl, d);
  });
}

qrot_status qrot_duality_gap(const qrot_problem* problem, const double* alpha, const double* beta,
                             double* out) {
  if (!problem || !alpha || !beta || !out) return invalid_arg("qrot_duality_gap: null argument");
  return guarded([&] {
    qrot::Potentials d{std::vector<double>(alpha, alpha + problem->impl.rows()),
                       std::vector<double>(beta, beta + problem->impl.cols())};
    *out = qrot::duality_gap(problem->impl, d);
  });
}

qrot_status qrot_normalize_gauge(double* alpha, int64_t alpha_len, double* beta,
                                 int64_t beta_len) {
  if (!alpha || !beta) return invalid_arg("qrot_normalize_gauge: null buffer");
  if (alpha_len < 1 || beta_len < 1)
    return invalid_arg("qrot_normalize_gauge: lengths must be >= 1");
  qrot::Potentials d{std::vector<double>(alpha, alpha + alpha_len),
                     std::vector<double>(beta, beta + beta_len)};
  const qrot::Potentials shifted = qrot::normalize_gauge(d);
  std::memcpy(alpha, shifted.alpha.data(), sizeof(double) * shifted.alpha.size());
  std::memcpy(beta, shifted.beta.data(), sizeof(double) * shifted.beta.size());
  return QROT_OK;
}

qrot_status qrot_solve_piecewise_equation(const double* breakpoints, int64_t n, double rhs,
                                          qrot_scalar_method method, double* root) {
  if (!breakpoints || !root) return invalid_arg("qrot_solve_piecewise_equation: null argument");
  if (n < 1) return invalid_arg("qrot_solve_piecewise_equation: n must be >= 1");
  return guarded([&] {
    const qrot::ScalarEquation eq{std::span(breakpoints, static_cast<std::size_t>(n)), rhs};
    *root = method == QROT_SCALAR_DIRECT_SEARCH ? qrot::solve_direct_search(eq)
                                                : qrot::solve_scalar_newton(eq);
  });
}

qrot_status qrot_grid_squared_cost(int64_t n, double* cost) {
  if (!cost) return invalid_arg("qrot_grid_squared_cost: null buffer");
  return guarded([&] {
    const qrot::Matrix c = qrot::squared_cost_coefficients(static_cast<int>(n));
    std::memcpy(cost, c.data.data(), sizeof(double) * c.data.size());
  });
}

qrot_status qrot_grid_midpoint_cost(int64_t n, qrot_cost_kind kind, double* cost) {
  if (!cost) return invalid_arg("qrot_grid_midpoint_cost: null buffer");
  qrot::CostKind k;
  switch (kind) {
    case QROT_COST_SQUARED: k = qrot::CostKind::squared; break;
    case QROT_COST_ABSOLUTE: k = qrot::CostKind::absolute; break;
    case QROT_COST_SQRT_ABS: k = qrot::CostKind::sqrt_abs; break;
    default: return invalid_arg("qrot_grid_midpoint_cost: unknown cost kind");
  }
  return guarded([&] {
    const qrot::Matrix c = qrot::midpoint_cost_coefficients(static_cast<int>(n), k);
    std::memcpy(cost, c.data.data(), sizeof(double) * c.data.size());
  });
}

qrot_status qrot_grid_discretize_marginal(double (*f)(double, void*), void* ctx, int64_t n,
                                          double* out) {
  if (!f || !out) return invalid_arg("qrot_grid_discretize_marginal: null argument");
  return guarded([&] {
    const auto v =
        qrot::discretize_marginal([&](double x) { return f(x, ctx); }, static_cast<int>(n));
    std::memcpy(out, v.data(), sizeof(double) * v.size());
  });
}

qrot_status qrot_grid_lorentzian_marginals(double m, double a, double m1, double a1, double m2,
                                           double a2, int64_t n, double* mu, double* nu) {
  if (!mu || !nu) return invalid_arg("qrot_grid_lorentzian_marginals: null buffer");
  return guarded([&] {
    const auto [mu_v, nu_v] = qrot::lorentzian_marginals(m, a, m1, a1, m2, a2, static_cast<int>(n));
    std::memcpy(mu, mu_v.data(), sizeof(double) * mu_v.size());
    std::memcpy(nu, nu_v.data(), sizeof(double) * nu_v.size());
  });
}

qrot_status qrot_map_quantity(qrot_quantity quantity, qrot_map_direction direction, int64_t n,
                              double gamma, double value, double* out) {
  if (!out) return invalid_arg("qrot_map_quantity: null out");
  qrot::Quantity q;
  switch (quantity) {
    case QROT_QUANTITY_PLAN: q = qrot::Quantity::plan; break;
    case QROT_QUANTITY_COST: q = qrot::Quantity::cost; break;
    case QROT_QUANTITY_MU: q = qrot::Quantity::mu; break;
    case QROT_QUANTITY_NU: q = qrot::Quantity::nu; break;
    case QROT_QUANTITY_ALPHA: q = qrot::Quantity::alpha; break;
    case QROT_QUANTITY_BETA: q = qrot::Quantity::beta; break;
    case QROT_QUANTITY_OBJECTIVE: q = qrot::Quantity::objective; break;
    case QROT_QUANTITY_TOLERANCE: q = qrot::Quantity::tolerance; break;
    default: return invalid_arg("qrot_map_quantity: unknown quantity");
  }
  if (direction != QROT_TO_SOLVER && direction != QROT_FROM_SOLVER)
    return invalid_arg("qrot_map_quantity: unknown direction");
  return guarded([&] {
    *out = qrot::map_quantity(q, direction == QROT_TO_SOLVER ? qrot::MapDirection::to_solver
                                                             : qrot::MapDirection::from_solver,
                              static_cast<int>(n), gamma, value);
  });
}

}  // extern "C"
