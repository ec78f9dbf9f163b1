#include "qrot/oracle.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "qrot/nlgs.hpp"
#include "qrot/ssn.hpp"
#include "test_util.hpp"

using namespace qrot;
using qrot_test::max_abs_diff;
using qrot_test::random_problem;

TEST_CASE("1x1 feasible set is a single point") {
  Problem p;
  p.cost = Matrix(1, 1, 0.0);
  p.mu = {1.0};
  p.nu = {1.0};
  p.gamma = 1.0;
  const Matrix plan = oracle_solve(p);
  CHECK(plan(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("plan does not depend on a constant cost shift") {
  std::mt19937_64 rng(701);
  const Problem p = random_problem(rng, 4, 4, 0.8);
  Problem shifted = p;
  for (double& c : shifted.cost.data) c += 5.0;
  const Matrix a = oracle_solve(p);
  const Matrix b = oracle_solve(shifted);
  CHECK(max_abs_diff(a, b) <= 1e-8);
}

TEST_CASE("2x2 permutation cost concentrates on the diagonal") {
  Problem p;
  p.cost = Matrix(2, 2, 1.0);
  p.cost(0, 0) = 0.0;
  p.cost(1, 1) = 0.0;
  p.mu = {1.0, 1.0};
  p.nu = {1.0, 1.0};
  p.gamma = 1.0;
  const Matrix plan = oracle_solve(p);
  CHECK(plan(0, 0) == doctest::Approx(1.0));
  CHECK(plan(1, 1) == doctest::Approx(1.0));
  CHECK(plan(0, 1) == doctest::Approx(0.0));
  CHECK(plan(1, 0) == doctest::Approx(0.0));
}

TEST_CASE("oracle, nlgs and ssn produce the same plan") {
  std::mt19937_64 rng(809);
  const double gammas[] = {0.1, 1.0, 10.0};
  for (int trial = 0; trial < 15; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 7);
    const int n = 2 + static_cast<int>(rng() % 7);
    const Problem p = random_problem(rng, m, n, gammas[trial % 3]);

    const Matrix reference = oracle_solve(p);

    SsnConfig ssn_cfg;
    ssn_cfg.tolerance = 1e-8;
    const auto ssn_rep = ssn_solve(p, ssn_cfg);
    REQUIRE(ssn_rep.converged);

    NlgsConfig nlgs_cfg;
    nlgs_cfg.tolerance = 1e-9;
    const auto nlgs_rep = nlgs_solve(p, nlgs_cfg);
    REQUIRE(nlgs_rep.converged);

    CHECK(max_abs_diff(ssn_rep.plan.dense(), reference) <= 1e-6);
    CHECK(max_abs_diff(nlgs_rep.plan.dense(), reference) <= 1e-6);
  }
}

TEST_CASE("oracle plan admits potentials satisfying the optimality system") {
  // Recover (alpha, beta) by least squares on the support equations
  // alpha_i + beta_j - c_ij = gamma pi_ij, then check the full system.
  std::mt19937_64 rng(907);
  for (int trial = 0; trial < 8; ++trial) {
    const Problem p = random_problem(rng, 5, 5, 1.0);
    const Matrix plan = oracle_solve(p);

    // Normal equations of the support system have the Newton matrix
    // structure; solve them with a tiny ridge via the matrix-free apply.
    ActivePattern pat;
    pat.rows = 5;
    pat.cols = 5;
    pat.row_ptr.assign(6, 0);
    std::vector<double> rhs_a(5, 0.0), rhs_b(5, 0.0);
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) {
        if (plan(i, j) > 1e-12) {
          pat.col_idx.push_back(j);
          const double target = p.cost(i, j) + p.gamma * plan(i, j);
          rhs_a[i] += target;
          rhs_b[j] += target;
        }
      }
      pat.row_ptr[i + 1] = static_cast<int>(pat.col_idx.size());
    }
    const NewtonMatrix normal = make_newton_matrix(std::move(pat), 1e-10);

    // Plain CG on the (M+N) normal system.
    std::vector<double> x(10, 0.0), r(10), pdir(10), ap(10);
    for (int k = 0; k < 5; ++k) {
      r[k] = rhs_a[k];
      r[5 + k] = rhs_b[k];
    }
    pdir = r;
    double rr = 0.0;
    for (double v : r) rr += v * v;
    for (int it = 0; it < 2000 && rr > 1e-24; ++it) {
      apply_newton_matrix(normal, std::span(pdir.data(), 5), std::span(pdir.data() + 5, 5),
                          std::span(ap.data(), 5), std::span(ap.data() + 5, 5));
      double pap = 0.0;
      for (int k = 0; k < 10; ++k) pap += pdir[k] * ap[k];
      const double step = rr / pap;
      double rr_next = 0.0;
      for (int k = 0; k < 10; ++k) {
        x[k] += step * pdir[k];
        r[k] -= step * ap[k];
        rr_next += r[k] * r[k];
      }
      const double ratio = rr_next / rr;
      rr = rr_next;
      for (int k = 0; k < 10; ++k) pdir[k] = r[k] + ratio * pdir[k];
    }

    const Potentials d{{x.begin(), x.begin() + 5}, {x.begin() + 5, x.end()}};
    const auto g = dual_gradient(p, d);
    for (double v : g.f1) CHECK(std::abs(v) <= 1e-6);
    for (double v : g.f2) CHECK(std::abs(v) <= 1e-6);
  }
}

TEST_CASE("oracle scale guard and cycle budget") {
  std::mt19937_64 rng(1009);
  const Problem big = random_problem(rng, 25, 25, 1.0);
  CHECK_THROWS_AS(oracle_solve(big), DomainError);

  const Problem p = random_problem(rng, 5, 5, 0.5);
  OracleConfig starved;
  starved.max_cycles = 2;
  CHECK_THROWS_AS(oracle_solve(p, starved), SolverError);
}
