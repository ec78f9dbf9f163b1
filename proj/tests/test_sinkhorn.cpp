#include "qrot/sinkhorn.hpp"

#include <cmath>

#include "doctest.h"
#include "test_util.hpp"

using namespace qrot;

TEST_CASE("constant cost gives the product coupling") {
  Problem p;
  p.cost = Matrix(2, 2, 0.0);
  p.mu = {1.0, 1.0};
  p.nu = {1.0, 1.0};
  p.gamma = 1.0;
  SinkhornReport rep;
  const Matrix plan = sinkhorn_solve(p, {}, &rep);
  CHECK(rep.converged);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(plan(i, j) == doctest::Approx(0.5));
}

TEST_CASE("1x1 problem is forced by the constraints") {
  Problem p;
  p.cost = Matrix(1, 1, 3.7);
  p.mu = {1.0};
  p.nu = {1.0};
  p.gamma = 1.0;
  const Matrix plan = sinkhorn_solve(p, {}, nullptr);
  CHECK(plan(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("tiny gamma_ent underflows the kernel") {
  Problem p;
  p.cost = Matrix(2, 2, 0.0);
  p.cost(0, 1) = 1.0;
  p.cost(1, 0) = 1.0;
  p.mu = {1.0, 1.0};
  p.nu = {1.0, 1.0};
  p.gamma = 1.0;
  SinkhornConfig cfg;
  cfg.gamma_ent = 1e-4;
  CHECK_THROWS_AS(sinkhorn_solve(p, cfg, nullptr), StabilityError);
}

TEST_CASE("converged plans are strictly positive with small residuals") {
  std::mt19937_64 rng(607);
  for (int trial = 0; trial < 5; ++trial) {
    const Problem p = qrot_test::random_problem(rng, 6, 8, 1.0);
    SinkhornConfig cfg;
    cfg.gamma_ent = 0.3;
    cfg.tolerance = 1e-8;
    SinkhornReport rep;
    const Matrix plan = sinkhorn_solve(p, cfg, &rep);
    REQUIRE(rep.converged);
    CHECK(rep.residual_nu <= cfg.tolerance);
    CHECK(rep.residual_mu <= cfg.tolerance);
    double min_entry = plan(0, 0);
    for (double v : plan.data) min_entry = std::min(min_entry, v);
    CHECK(min_entry > 0.0);
  }
}

TEST_CASE("config validation") {
  Problem p;
  p.cost = Matrix(1, 1, 0.0);
  p.mu = {1.0};
  p.nu = {1.0};
  p.gamma = 1.0;
  SinkhornConfig bad;
  bad.gamma_ent = 0.0;
  CHECK_THROWS_AS(sinkhorn_solve(p, bad, nullptr), DomainError);
}
