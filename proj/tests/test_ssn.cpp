#include "qrot/ssn.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "qrot/oracle.hpp"
#include "test_util.hpp"

using namespace qrot;
using qrot_test::random_potentials;
using qrot_test::random_problem;

namespace {

Problem one_by_one(double c, double mass = 1.0, double gamma = 1.0) {
  Problem p;
  p.cost = Matrix(1, 1, c);
  p.mu = {mass};
  p.nu = {mass};
  p.gamma = gamma;
  return p;
}

ActivePattern random_pattern(std::mt19937_64& rng, int m, int n, double density) {
  std::bernoulli_distribution flip(density);
  ActivePattern pat;
  pat.rows = m;
  pat.cols = n;
  pat.row_ptr.assign(m + 1, 0);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j)
      if (flip(rng)) pat.col_idx.push_back(j);
    pat.row_ptr[i + 1] = static_cast<int>(pat.col_idx.size());
  }
  return pat;
}

double quadratic_form(const NewtonMatrix& mat, const std::vector<double>& a,
                      const std::vector<double>& b) {
  const int m = mat.pattern.rows, n = mat.pattern.cols;
  std::vector<double> out_a(m), out_b(n);
  apply_newton_matrix(mat, a, b, out_a, out_b);
  double q = 0.0;
  for (int i = 0; i < m; ++i) q += a[i] * out_a[i];
  for (int j = 0; j < n; ++j) q += b[j] * out_b[j];
  return q;
}

}  // namespace

TEST_CASE("active pattern assembly") {
  SUBCASE("tie at zero is active") {
    const Problem p = one_by_one(0.0);
    const auto pat = assemble_active_pattern(p, {{0.0}, {0.0}});
    CHECK(pat.nnz() == 1);
  }
  SUBCASE("strictly negative entry is inactive") {
    const Problem p = one_by_one(1.0);
    const auto pat = assemble_active_pattern(p, {{0.0}, {0.0}});
    CHECK(pat.nnz() == 0);
  }
  SUBCASE("sign of alpha decides rows for zero cost") {
    Problem p;
    p.cost = Matrix(2, 2, 0.0);
    p.mu = {1.0, 1.0};
    p.nu = {1.0, 1.0};
    p.gamma = 1.0;
    const auto pat = assemble_active_pattern(p, {{1.0, -1.0}, {0.0, 0.0}});
    CHECK(pat.row_ptr[1] - pat.row_ptr[0] == 2);
    CHECK(pat.row_ptr[2] - pat.row_ptr[1] == 0);
  }
}

TEST_CASE("newton matrix application") {
  SUBCASE("(1, -1) spans the kernel of the 1x1 all-active pattern") {
    ActivePattern pat;
    pat.rows = pat.cols = 1;
    pat.row_ptr = {0, 1};
    pat.col_idx = {0};
    const auto mat = make_newton_matrix(pat, 0.0);
    std::vector<double> oa(1), ob(1);
    apply_newton_matrix(mat, std::vector<double>{1.0}, std::vector<double>{-1.0}, oa, ob);
    CHECK(oa[0] == doctest::Approx(0.0));
    CHECK(ob[0] == doctest::Approx(0.0));
  }
  SUBCASE("epsilon shifts the diagonal") {
    ActivePattern pat;
    pat.rows = pat.cols = 1;
    pat.row_ptr = {0, 1};
    pat.col_idx = {0};
    const auto mat = make_newton_matrix(pat, 0.5);
    std::vector<double> oa(1), ob(1);
    apply_newton_matrix(mat, std::vector<double>{1.0}, std::vector<double>{0.0}, oa, ob);
    CHECK(oa[0] == doctest::Approx(1.5));
    CHECK(ob[0] == doctest::Approx(1.0));
  }
  SUBCASE("empty pattern with epsilon 1 is the identity") {
    ActivePattern pat;
    pat.rows = 2;
    pat.cols = 3;
    pat.row_ptr = {0, 0, 0};
    const auto mat = make_newton_matrix(pat, 1.0);
    const std::vector<double> a{0.3, -0.7};
    const std::vector<double> b{1.0, 2.0, -3.0};
    std::vector<double> oa(2), ob(3);
    apply_newton_matrix(mat, a, b, oa, ob);
    for (int i = 0; i < 2; ++i) CHECK(oa[i] == doctest::Approx(a[i]));
    for (int j = 0; j < 3; ++j) CHECK(ob[j] == doctest::Approx(b[j]));
  }
}

TEST_CASE("quadratic form identity and positive semidefiniteness") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 3 + static_cast<int>(rng() % 5);
    const int n = 2 + static_cast<int>(rng() % 6);
    const auto pat = random_pattern(rng, m, n, 0.4);
    const auto mat = make_newton_matrix(pat, 0.0);
    std::vector<double> a(m), b(n);
    for (double& v : a) v = val(rng);
    for (double& v : b) v = val(rng);

    double expected = 0.0;
    for (int i = 0; i < m; ++i)
      for (int k = mat.pattern.row_ptr[i]; k < mat.pattern.row_ptr[i + 1]; ++k) {
        const double s = a[i] + b[mat.pattern.col_idx[k]];
        expected += s * s;
      }
    const double q = quadratic_form(mat, a, b);
    CHECK(q >= -1e-12);
    CHECK(std::abs(q - expected) <= 1e-10 * std::max(1.0, std::abs(expected)));
  }
}

TEST_CASE("constant vector pair (1, -1) is always in the kernel") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 6);
    const int n = 2 + static_cast<int>(rng() % 6);
    const auto mat = make_newton_matrix(random_pattern(rng, m, n, 0.5), 0.0);
    std::vector<double> a(m, 1.0), b(n, -1.0), oa(m), ob(n);
    apply_newton_matrix(mat, a, b, oa, ob);
    for (double v : oa) CHECK(std::abs(v) <= 1e-12);
    for (double v : ob) CHECK(std::abs(v) <= 1e-12);
  }
}

TEST_CASE("single newton step on the 1x1 problem") {
  const Problem p = one_by_one(0.0);
  SsnConfig cfg;
  cfg.epsilon = 1e-6;
  StepInfo info;
  const Potentials next = ssn_step(p, {{0.0}, {0.0}}, cfg, &info);
  // G = [[1,1],[1,1]], rhs = (1,1): the symmetric solve gives 1/(2+eps).
  CHECK(next.alpha[0] == doctest::Approx(1.0 / (2.0 + cfg.epsilon)));
  CHECK(next.beta[0] == doctest::Approx(1.0 / (2.0 + cfg.epsilon)));
  CHECK(info.step_length == doctest::Approx(1.0));
  CHECK(info.directional_derivative < 0.0);
}

TEST_CASE("step from a stationary point returns unchanged potentials") {
  const Problem p = one_by_one(0.0);
  StepInfo info;
  const Potentials fixed = ssn_step(p, {{0.5}, {0.5}}, {}, &info);
  CHECK(fixed.alpha[0] == 0.5);
  CHECK(fixed.beta[0] == 0.5);
  CHECK(info.directional_derivative == 0.0);
}

TEST_CASE("all-inactive region gives the pure gradient step -F/eps") {
  Problem p;
  p.cost = Matrix(2, 2, 0.0);
  p.mu = {1.0, 1.0};
  p.nu = {1.0, 1.0};
  p.gamma = 2.0;
  SsnConfig cfg;
  cfg.epsilon = 0.5;
  const Potentials start{{-10.0, -10.0}, {-10.0, -10.0}};
  StepInfo info;
  const Potentials next = ssn_step(p, start, cfg, &info);
  // F = -gamma (nu; mu) and the step gamma nu_i / eps keeps the pattern
  // inactive, where Phi is linear, so t = 1 is accepted.
  CHECK(info.step_length == doctest::Approx(1.0));
  const double full = 2.0 * 1.0 / 0.5;
  for (int i = 0; i < 2; ++i) CHECK(next.alpha[i] == doctest::Approx(-10.0 + full));
  for (int j = 0; j < 2; ++j) CHECK(next.beta[j] == doctest::Approx(-10.0 + full));
}

TEST_CASE("directional derivative matches the plan-based formula") {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 20; ++trial) {
    const Problem p = random_problem(rng, 5, 4, 0.7);
    const Potentials d = random_potentials(rng, 5, 4);
    SsnConfig cfg;
    StepInfo info;
    const Potentials next = ssn_step(p, d, cfg, &info);
    // Reconstruct s from the accepted step and re-derive
    // D = gamma sum_ij pi_ij (s_a_i + s_b_j) - gamma(<s_a, nu> + <s_b, mu>).
    const double t = info.step_length;
    std::vector<double> sa(5), sb(4);
    for (int i = 0; i < 5; ++i) sa[i] = (next.alpha[i] - d.alpha[i]) / t;
    for (int j = 0; j < 4; ++j) sb[j] = (next.beta[j] - d.beta[j]) / t;
    const Plan plan = plan_from_potentials(p, d);
    double dir = 0.0;
    for (const auto& e : plan.entries) dir += e.value * (sa[e.row] + sb[e.col]);
    dir *= p.gamma;
    for (int i = 0; i < 5; ++i) dir -= p.gamma * sa[i] * p.nu[i];
    for (int j = 0; j < 4; ++j) dir -= p.gamma * sb[j] * p.mu[j];
    CHECK(std::abs(dir - info.directional_derivative) <=
          1e-8 * std::max(1.0, std::abs(dir)));
  }
}

TEST_CASE("ssn_solve on the 1x1 problem") {
  const Problem p = one_by_one(0.0);
  SsnConfig cfg;
  cfg.tolerance = 1e-8;
  const auto report = ssn_solve(p, cfg);
  CHECK(report.converged);
  CHECK(report.iterations <= 3);
  REQUIRE(report.plan.nnz() == 1);
  CHECK(report.plan.entries[0].value == doctest::Approx(1.0));
}

TEST_CASE("ssn_solve starting at the solution converges immediately") {
  const Problem p = one_by_one(0.0);
  const auto report = ssn_solve(p, {{0.5}, {0.5}}, {});
  CHECK(report.converged);
  CHECK(report.iterations == 0);
  CHECK(report.trace.size() == 1);
}

TEST_CASE("random 10x10 instance converges and certifies against the oracle") {
  std::mt19937_64 rng(97);
  const Problem p = random_problem(rng, 10, 10, 0.05);
  SsnConfig cfg;
  cfg.tolerance = 1e-6;
  const auto report = ssn_solve(p, cfg);
  REQUIRE(report.converged);
  CHECK(report.trace.back().residual_nu <= 1e-6);
  CHECK(report.trace.back().residual_mu <= 1e-6);

  double mass = 0.0;
  for (double v : p.nu) mass += v;
  CHECK(std::abs(duality_gap(p, report.potentials)) <= 1e-6 * mass);

  const Matrix reference = oracle_solve(p, {});
  CHECK(qrot_test::max_abs_diff(report.plan.dense(), reference) <= 1e-6);
}

TEST_CASE("objective decreases strictly and armijo holds along the trace") {
  std::mt19937_64 rng(101);
  const Problem p = random_problem(rng, 8, 7, 0.2);
  SsnConfig cfg;
  cfg.tolerance = 1e-7;
  Potentials d{std::vector<double>(8, 0.0), std::vector<double>(7, 0.0)};
  double phi = dual_objective(p, d);
  for (int it = 0; it < 100; ++it) {
    const auto [res_nu, res_mu] = marginal_residuals(p, plan_from_potentials(p, d));
    if (res_nu <= cfg.tolerance && res_mu <= cfg.tolerance) break;
    StepInfo info;
    d = ssn_step(p, d, cfg, &info);
    const double phi_next = dual_objective(p, d);
    CHECK(info.directional_derivative < 0.0);
    CHECK(phi_next <
          phi + info.step_length * cfg.theta * info.directional_derivative + 1e-14);
    CHECK(phi_next < phi);
    phi = phi_next;
  }
}

TEST_CASE("conjugate gradient and direct factorization agree") {
  std::mt19937_64 rng(113);
  for (int trial = 0; trial < 5; ++trial) {
    const Problem p = random_problem(rng, 7, 9, 0.5);
    SsnConfig cg;
    cg.tolerance = 1e-9;
    SsnConfig direct = cg;
    direct.linear_solver = LinearSolver::direct_sparse;
    const auto rep_cg = ssn_solve(p, cg);
    const auto rep_direct = ssn_solve(p, direct);
    REQUIRE(rep_cg.converged);
    REQUIRE(rep_direct.converged);
    CHECK(qrot_test::max_abs_diff(rep_cg.plan.dense(), rep_direct.plan.dense()) <= 1e-7);
  }
}

TEST_CASE("plan satisfies the optimality system at termination") {
  std::mt19937_64 rng(127);
  const Problem p = random_problem(rng, 6, 6, 0.4);
  SsnConfig cfg;
  cfg.tolerance = 1e-8;
  const auto report = ssn_solve(p, cfg);
  REQUIRE(report.converged);
  // Row sums of (alpha (+) beta - c)_+ must equal gamma nu (and columns
  // gamma mu) up to gamma * tolerance.
  const auto g = dual_gradient(p, report.potentials);
  for (double v : g.f1) CHECK(std::abs(v) <= p.gamma * cfg.tolerance);
  for (double v : g.f2) CHECK(std::abs(v) <= p.gamma * cfg.tolerance);
}

TEST_CASE("config validation") {
  const Problem p = one_by_one(0.0);
  SsnConfig bad;
  bad.epsilon = 0.0;
  CHECK_THROWS_AS(ssn_solve(p, bad), DomainError);
  bad = {};
  bad.theta = 1.0;
  CHECK_THROWS_AS(ssn_solve(p, bad), DomainError);
  bad = {};
  bad.kappa = 0.0;
  CHECK_THROWS_AS(ssn_solve(p, bad), DomainError);
}
