#include <doctest.h>

#include <random>

#include <Eigen/Dense>

#include "msqp/errors.hpp"
#include "msqp/kkt.hpp"
#include "msqp/suite.hpp"
#include "support.hpp"

using namespace msqp;
using namespace msqp::testing;

namespace {

// f(x) = ½x², c(x) = x − 1 at x = 0, y = 0.
KktSystem scalar_system() {
  return assemble(Matrix::Ones(1, 1), Matrix::Ones(1, 1), Vector::Zero(1),
                  Vector::Constant(1, -1.0));
}

}  // namespace

TEST_SUITE("kkt") {

TEST_CASE("scalar quadratic system solves to d = 1, δ = -1") {
  const KktSystem s = scalar_system();
  CHECK(s.rhs() == vec({0.0, 1.0}));
  const KktSolution sol = solve_dense(s);
  CHECK(sol.d[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sol.delta[0] == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("zero right-hand side gives the zero step") {
  std::mt19937_64 rng(1);
  KktSystem s = random_kkt_system(rng, 5, 2);
  s.rhs_top.setZero();
  s.rhs_bottom.setZero();
  const KktSolution sol = solve_dense(regularize(s));
  CHECK(sol.d.isZero());
  CHECK(sol.delta.isZero());
}

TEST_CASE("Maratos optimum has a zero right-hand side") {
  const TestProblem tp = maratos_counterexample();
  Oracle oracle(tp.problem);
  const KktSystem s = assemble(oracle, {vec({1, 0}), vec({-0.5})});
  CHECK(s.rhs().lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("regularize leaves a system with positive reduced Hessian untouched") {
  std::mt19937_64 rng(2);
  KktSystem s = random_kkt_system(rng, 4, 2);
  s.hessian = Matrix::Identity(4, 4) * 3;
  const KktSystem r = regularize(s);
  CHECK(r.regularization == 0.0);
  CHECK(r.hessian == s.hessian);
}

TEST_CASE("regularize walks the doubling sequence to the first sufficient shift") {
  KktSystem s;
  s.hessian = Matrix::Zero(2, 2);
  s.hessian(0, 0) = 1;
  s.hessian(1, 1) = -1;
  s.jacobian = Matrix(1, 2);
  s.jacobian << 1, 0;
  s.rhs_top = Vector::Zero(2);
  s.rhs_bottom = Vector::Zero(1);
  const RegularizationConfig cfg;
  // Reduced Hessian is −1 on span{(0, 1)}.
  double expected = cfg.lambda0;
  while (-1 + expected < cfg.zeta_min) expected *= 2;
  CHECK(expected == doctest::Approx(1.048576).epsilon(1e-12));
  const KktSystem r = regularize(s, cfg);
  CHECK(r.regularization == expected);
  CHECK(r.hessian(1, 1) == -1 + expected);
  CHECK(reduced_hessian_min_eigenvalue(r.hessian, r.jacobian) >= cfg.zeta_min);
}

TEST_CASE("square Jacobian needs no regularization") {
  std::mt19937_64 rng(3);
  KktSystem s = random_kkt_system(rng, 4, 4);
  s.hessian = -10 * Matrix::Identity(4, 4);
  CHECK(regularize(s).regularization == 0.0);
}

TEST_CASE("regularize is idempotent") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto [n, m] = random_dimensions(rng);
    const KktSystem once = regularize(random_kkt_system(rng, n, m));
    const KktSystem twice = regularize(once);
    CHECK(twice.regularization == once.regularization);
    CHECK(twice.hessian == once.hessian);
  }
}

TEST_CASE("regularize gives up past the cap") {
  KktSystem s;
  s.hessian = -1e9 * Matrix::Identity(2, 2);
  s.jacobian = Matrix(1, 2);
  s.jacobian << 1, 0;
  s.rhs_top = Vector::Zero(2);
  s.rhs_bottom = Vector::Zero(1);
  CHECK_THROWS_AS(regularize(s), IllPosedSubproblem);
}

TEST_CASE("LICQ failure is reported for dependent constraint rows") {
  Matrix J(2, 3);
  J << 1, 2, 3, 2, 4, 6;
  CHECK_THROWS_AS(check_licq(J), LicqFailure);
  CHECK_NOTHROW(check_licq(Matrix::Identity(2, 3)));
}

TEST_CASE("dense solve agrees with an independent general solver on 5+2 systems") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    KktSystem s = random_kkt_system(rng, 5, 2);
    s.hessian += 6 * Matrix::Identity(5, 5);  // well conditioned
    const KktSolution sol = solve_dense(s);
    CHECK(sol.residual_norm_inf() <= 1e-10);
    const Vector reference = s.block_matrix().fullPivLu().solve(s.rhs());
    Vector stacked(7);
    stacked << sol.d, sol.delta;
    CHECK((stacked - reference).lpNorm<Eigen::Infinity>() <= 1e-8);
  }
}

TEST_CASE("dense solve residual and linearized constraints on 100 random systems") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const auto [n, m] = random_dimensions(rng);
    const KktSystem s = regularize(random_kkt_system(rng, n, m));
    const KktSolution sol = solve_dense(s);
    Vector stacked(n + m);
    stacked << sol.d, sol.delta;
    const Vector residual = s.block_matrix() * stacked - s.rhs();
    const double scale = std::max(1.0, s.rhs().lpNorm<Eigen::Infinity>());
    CHECK(residual.lpNorm<Eigen::Infinity>() <= 1e-10 * scale);
    CHECK(sol.residual_norm_inf() <= 1e-10 * scale);
    // J d + c = 0 with rhs_bottom = −c.
    CHECK((s.jacobian * sol.d - s.rhs_bottom).lpNorm<Eigen::Infinity>() <= 1e-8);
  }
}

TEST_CASE("block product matches the dense block matrix") {
  std::mt19937_64 rng(7);
  const KktSystem s = random_kkt_system(rng, 6, 3);
  const Vector v = random_vector(rng, 9);
  CHECK((s.apply(v) - s.block_matrix() * v).lpNorm<Eigen::Infinity>() <= 1e-12);
  const Matrix K = s.block_matrix();
  CHECK(K.topRightCorner(6, 3) == s.jacobian.transpose());
  CHECK(K.bottomRightCorner(3, 3).isZero());
}

TEST_CASE("decompose_direction at a feasible point has no normal part") {
  std::mt19937_64 rng(8);
  KktSystem s = regularize(random_kkt_system(rng, 5, 2));
  s.rhs_bottom.setZero();
  const KktSolution sol = solve_dense(s);
  const DirectionSplit split = decompose_direction(s, sol);
  CHECK(split.normal.lpNorm<Eigen::Infinity>() <= 1e-14);
  CHECK((split.tangential - sol.d).lpNorm<Eigen::Infinity>() <= 1e-14);
}

TEST_CASE("decompose_direction normal part for J = [1 0], c = -1") {
  KktSystem s = assemble(Matrix::Identity(2, 2), (Matrix(1, 2) << 1, 0).finished(),
                         Vector::Zero(2), Vector::Constant(1, -1.0));
  const DirectionSplit split = decompose_direction(s, solve_dense(s));
  CHECK((split.normal - vec({1, 0})).norm() <= 1e-15);
}

TEST_CASE("tangential and normal parts are orthogonal with J u = 0") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const auto [n, m] = random_dimensions(rng);
    const KktSystem s = regularize(random_kkt_system(rng, n, m));
    const KktSolution sol = solve_dense(s);
    const DirectionSplit split = decompose_direction(s, sol);
    CHECK(std::abs(split.tangential.dot(split.normal)) <= 1e-10 * (1 + sol.d.squaredNorm()));
    CHECK((s.jacobian * split.tangential).lpNorm<Eigen::Infinity>() <= 1e-10 * (1 + sol.d.norm()));
    CHECK((split.tangential + split.normal - sol.d).lpNorm<Eigen::Infinity>() <= 1e-12 * (1 + sol.d.norm()));
  }
}

TEST_CASE("null-space basis is orthonormal and annihilated by J") {
  std::mt19937_64 rng(10);
  const Matrix J = random_matrix(rng, 3, 8);
  const Matrix Z = null_space_basis(J);
  CHECK(Z.cols() == 5);
  CHECK((J * Z).norm() <= 1e-12);
  CHECK((Z.transpose() * Z - Matrix::Identity(5, 5)).norm() <= 1e-12);
}

}  // TEST_SUITE
