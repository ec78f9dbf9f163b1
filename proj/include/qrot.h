/*
 * qrot - quadratically regularized optimal transport solvers.
 *
 * C interface of the shared library. All objects are opaque handles; every
 * function that can fail returns a qrot_status, with a human-readable
 * message available from qrot_last_error() (thread-local, valid until the
 * next failing call on the same thread).
 *
 * Conventions: the problem is
 *
 *   min  <pi, c> + gamma/2 ||pi||_F^2
 *   s.t. pi 1 = nu  (row sums, length M),
 *        pi^T 1 = mu (column sums, length N),
 *        pi >= 0
 *
 * with a dense row-major cost c of shape M x N. Marginals must be strictly
 * positive and have equal mass. Plans are reported as sorted row-major
 * (row, col, value) triplets with strictly positive values.
 */

#ifndef QROT_H
#define QROT_H

#include <stdint.h>

#if defined(_WIN32)
#define QROT_API __declspec(dllexport)
#else
#define QROT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qrot_status {
  QROT_OK = 0,
  QROT_ERR_INVALID_ARG = 1, /* null handle / null buffer / unknown enum value */
  QROT_ERR_DIMENSION = 2,   /* shape mismatch */
  QROT_ERR_DOMAIN = 3,      /* invalid numeric input (unbalanced mass, ...) */
  QROT_ERR_SOLVER = 4,      /* linear solve, line search or oracle failure */
  QROT_ERR_STABILITY = 5,   /* sinkhorn floating-point breakdown */
  QROT_ERR_INTERNAL = 6
} qrot_status;

typedef enum qrot_scalar_method {
  QROT_SCALAR_DIRECT_SEARCH = 0,
  QROT_SCALAR_NEWTON = 1
} qrot_scalar_method;

typedef enum qrot_linear_solver {
  QROT_LINEAR_CG = 0,
  QROT_LINEAR_DIRECT = 1
} qrot_linear_solver;

typedef enum qrot_cost_kind {
  QROT_COST_SQUARED = 0,
  QROT_COST_ABSOLUTE = 1,
  QROT_COST_SQRT_ABS = 2
} qrot_cost_kind;

typedef enum qrot_quantity {
  QROT_QUANTITY_PLAN = 0,
  QROT_QUANTITY_COST = 1,
  QROT_QUANTITY_MU = 2,
  QROT_QUANTITY_NU = 3,
  QROT_QUANTITY_ALPHA = 4,
  QROT_QUANTITY_BETA = 5,
  QROT_QUANTITY_OBJECTIVE = 6,
  QROT_QUANTITY_TOLERANCE = 7
} qrot_quantity;

typedef enum qrot_map_direction {
  QROT_TO_SOLVER = 0,
  QROT_FROM_SOLVER = 1
} qrot_map_direction;

typedef struct qrot_problem qrot_problem;
typedef struct qrot_result qrot_result;

QROT_API const char* qrot_version(void);
QROT_API const char* qrot_status_name(qrot_status status);
QROT_API const char* qrot_last_error(void);

/* ------------------------------------------------------------------ */
/* Problem handles                                                     */

QROT_API qrot_status qrot_problem_create(int64_t rows, int64_t cols, const double* cost,
                                         const double* mu, const double* nu, double gamma,
                                         qrot_problem** out);
QROT_API void qrot_problem_destroy(qrot_problem* problem);
QROT_API qrot_status qrot_problem_dims(const qrot_problem* problem, int64_t* rows, int64_t* cols);

/* ------------------------------------------------------------------ */
/* Solver options (value structs; *_init fills the defaults)           */

typedef struct qrot_nlgs_options {
  double tolerance;
  int64_t max_sweeps;
  qrot_scalar_method scalar_method;
} qrot_nlgs_options;
QROT_API void qrot_nlgs_options_init(qrot_nlgs_options* opts);

typedef struct qrot_ssn_options {
  double epsilon; /* Newton matrix regularization, > 0 */
  double theta;   /* Armijo slope factor, in (0,1) */
  double kappa;   /* backtracking factor, in (0,1) */
  double tolerance;
  int64_t max_iters;
  qrot_linear_solver linear_solver;
  double cg_tolerance;
  int64_t cg_max_iters;
} qrot_ssn_options;
QROT_API void qrot_ssn_options_init(qrot_ssn_options* opts);

typedef struct qrot_sinkhorn_options {
  double gamma_ent;
  double tolerance;
  int64_t max_iters;
} qrot_sinkhorn_options;
QROT_API void qrot_sinkhorn_options_init(qrot_sinkhorn_options* opts);

/* ------------------------------------------------------------------ */
/* Solves. opts == NULL means defaults. Non-convergence within the     */
/* iteration budget is NOT an error; check qrot_result_converged.      */

QROT_API qrot_status qrot_solve_ssn(const qrot_problem* problem, const qrot_ssn_options* opts,
                                    qrot_result** out);
QROT_API qrot_status qrot_solve_nlgs(const qrot_problem* problem, const qrot_nlgs_options* opts,
                                     qrot_result** out);
QROT_API qrot_status qrot_solve_sinkhorn(const qrot_problem* problem,
                                         const qrot_sinkhorn_options* opts, qrot_result** out);

/* ------------------------------------------------------------------ */
/* Results                                                             */

QROT_API void qrot_result_destroy(qrot_result* result);
QROT_API int qrot_result_converged(const qrot_result* result);
QROT_API int64_t qrot_result_iterations(const qrot_result* result);
QROT_API int64_t qrot_result_plan_nnz(const qrot_result* result);

/* Buffers must hold plan_nnz entries each. */
QROT_API qrot_status qrot_result_plan_triplets(const qrot_result* result, int64_t* rows,
                                               int64_t* cols, double* values);
/* Buffer must hold M*N doubles (row-major). */
QROT_API qrot_status qrot_result_plan_dense(const qrot_result* result, double* plan);

/* Dual potentials; QROT_ERR_INVALID_ARG for sinkhorn results. */
QROT_API qrot_status qrot_result_potentials(const qrot_result* result, double* alpha, double* beta);

/* Per-iteration trace; row 0 is the initial state. Sinkhorn results have
 * trace size 0. Array arguments may be NULL to skip a column. */
QROT_API int64_t qrot_result_trace_size(const qrot_result* result);
QROT_API qrot_status qrot_result_trace(const qrot_result* result, int64_t* iteration, double* phi,
                                       double* residual_nu, double* residual_mu,
                                       double* step_length);

QROT_API qrot_status qrot_result_residuals(const qrot_result* result, double* residual_nu,
                                           double* residual_mu);
/* Final dual objective / duality gap; QROT_ERR_INVALID_ARG for sinkhorn. */
QROT_API qrot_status qrot_result_objective(const qrot_result* result, double* phi);
QROT_API qrot_status qrot_result_duality_gap(const qrot_result* result, double* gap);

/* ------------------------------------------------------------------ */
/* Stateless operations                                                */

QROT_API qrot_status qrot_dual_objective(const qrot_problem* problem, const double* alpha,
                                         const double* beta, double* out);
QROT_API qrot_status qrot_duality_gap(const qrot_problem* problem, const double* alpha,
                                      const double* beta, double* out);
/* In-place gauge shift (alpha + C, beta - C) with C = mean(beta). */
QROT_API qrot_status qrot_normalize_gauge(double* alpha, int64_t alpha_len, double* beta,
                                          int64_t beta_len);
/* Root of sum_j (x - y_j)_+ = rhs, rhs > 0. */
QROT_API qrot_status qrot_solve_piecewise_equation(const double* breakpoints, int64_t n, double rhs,
                                                   qrot_scalar_method method, double* root);

/* ------------------------------------------------------------------ */
/* Discretization of [0,1] into n cells (piecewise constant)           */

/* Exact cell averages of (x-y)^2: c_ij = ((i-j)^2 + 1/6)/n^2. Buffer n*n. */
QROT_API qrot_status qrot_grid_squared_cost(int64_t n, double* cost);
/* Cost evaluated at cell midpoints. Buffer n*n. */
QROT_API qrot_status qrot_grid_midpoint_cost(int64_t n, qrot_cost_kind kind, double* cost);
/* Midpoint-rule cell averages of f >= 0, rescaled to sum n. Buffer n. */
QROT_API qrot_status qrot_grid_discretize_marginal(double (*f)(double x, void* ctx), void* ctx,
                                                   int64_t n, double* out);
/* mu from one Lorentzian bump at a, nu from two bumps at a1, a2. */
QROT_API qrot_status qrot_grid_lorentzian_marginals(double m, double a, double m1, double a1,
                                                    double m2, double a2, int64_t n, double* mu,
                                                    double* nu);
/* Conversion between discretization coefficients and solver quantities. */
QROT_API qrot_status qrot_map_quantity(qrot_quantity quantity, qrot_map_direction direction,
                                       int64_t n, double gamma, double value, double* out);

#ifdef __cplusplus
}
#endif

#endif /* QROT_H */
