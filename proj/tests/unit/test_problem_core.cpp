#include <doctest.h>

#include <cmath>
#include <random>

#include "msqp/errors.hpp"
#include "msqp/logistic.hpp"
#include "msqp/problem.hpp"
#include "msqp/suite.hpp"
#include "support.hpp"

using namespace msqp;
using namespace msqp::testing;

TEST_SUITE("problem_core") {

TEST_CASE("Lagrangian gradient vanishes at the Maratos minimizer") {
  Oracle oracle(maratos_counterexample().problem);
  const PrimalDual w{vec({1.0, 0.0}), vec({-0.5})};
  // g = (2x₁, 2x₂) = (2, 0); J = (2(x₁+1), 2x₂) = (4, 0).
  const Vector expected = vec({2.0, 0.0}) + vec({4.0, 0.0}) * -0.5;
  const Vector got = lagrangian_gradient(oracle, w);
  CHECK(expected.lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((got - expected).lpNorm<Eigen::Infinity>() <= 1e-15);
}

TEST_CASE("zero multipliers give the objective gradient exactly") {
  const TestProblem tp = constrained_rosenbrock();
  Oracle oracle(tp.problem);
  const Vector x = vec({-1.1, 1.0});
  const PrimalDual w{x, Vector::Zero(1)};
  CHECK(lagrangian_gradient(oracle, w) == tp.problem->gradient(x));
}

TEST_CASE("linear problem Lagrangian gradient is a + Bᵀy at every x") {
  std::mt19937_64 rng(11);
  const Vector a = random_vector(rng, 4);
  const Matrix B = random_matrix(rng, 2, 4);
  const Vector b = random_vector(rng, 2);
  Oracle oracle(linear_problem(a, B, b).problem);
  const Vector y = random_vector(rng, 2);
  const Vector expected = a + B.transpose() * y;
  for (int trial = 0; trial < 5; ++trial) {
    const Vector got = lagrangian_gradient(oracle, {random_vector(rng, 4), y});
    CHECK((got - expected).lpNorm<Eigen::Infinity>() <= 1e-14);
  }
}

TEST_CASE("Maratos Lagrangian Hessian is (2 + 2y) I") {
  Oracle oracle(maratos_counterexample().problem);
  for (double y : {-0.5, 0.0, 1.5, -3.0}) {
    const Matrix W = lagrangian_hessian(oracle, {vec({0.3, -0.8}), vec({y})});
    CHECK(W.isApprox((2 + 2 * y) * Matrix::Identity(2, 2)));
  }
}

TEST_CASE("zero multipliers give W = H and affine constraints give constant W") {
  const TestProblem tp = constrained_rosenbrock();
  Oracle oracle(tp.problem);
  const Vector x = vec({0.4, 2.0});
  CHECK(lagrangian_hessian(oracle, {x, Vector::Zero(1)}) == tp.problem->hessian(x));

  std::mt19937_64 rng(3);
  const Matrix Q = Matrix::Identity(3, 3) * 2;
  auto problem = quadratic_linear(Q, random_vector(rng, 3), random_matrix(rng, 1, 3),
                                  random_vector(rng, 1));
  Oracle qo(problem);
  const Matrix W0 = lagrangian_hessian(qo, {random_vector(rng, 3), vec({0.7})});
  const Matrix W1 = lagrangian_hessian(qo, {random_vector(rng, 3), vec({0.7})});
  CHECK(W0 == W1);
}

TEST_CASE("Lagrangian Hessian is exactly symmetric") {
  for (const TestProblem& tp : analytic_bank()) {
    Oracle oracle(tp.problem);
    std::mt19937_64 rng(5);
    const int n = tp.problem->num_variables();
    const int m = tp.problem->num_constraints();
    const Matrix W = lagrangian_hessian(
        oracle, {tp.start.x0 + 0.1 * random_vector(rng, n), random_vector(rng, m)});
    CHECK_MESSAGE(W == W.transpose(), tp.key);
  }
}

TEST_CASE("finite differences agree with the Maratos oracle at (0.3, 0.7)") {
  const auto report =
      finite_difference_check(*maratos_counterexample().problem, vec({0.3, 0.7}), 1e-5);
  CHECK(report.gradient <= 1e-5);
  CHECK(report.hessian <= 1e-5);
  CHECK(report.jacobian <= 1e-5);
  CHECK(report.constraint_hessian <= 1e-5);
}

TEST_CASE("finite differences are exact to round-off on a linear problem") {
  std::mt19937_64 rng(9);
  const TestProblem tp = linear_problem(random_vector(rng, 3), random_matrix(rng, 2, 3),
                                        random_vector(rng, 2));
  const auto report = finite_difference_check(*tp.problem, random_vector(rng, 3), 1e-5);
  CHECK(report.max_first_order() <= 1e-10);
  CHECK(report.max_second_order() <= 1e-10);
}

TEST_CASE("finite differences agree with constrained Rosenbrock at (-1.1, 1)") {
  const auto report =
      finite_difference_check(*constrained_rosenbrock().problem, vec({-1.1, 1.0}), 1e-5);
  CHECK(report.max_first_order() <= 1e-5);
  CHECK(report.max_second_order() <= 1e-5);
}

TEST_CASE("bank gradients and Jacobians match differences at 20 points near the start") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> box(-1.0, 1.0);
  for (const TestProblem& tp : analytic_bank()) {
    for (int trial = 0; trial < 20; ++trial) {
      Vector x = tp.start.x0;
      for (Eigen::Index i = 0; i < x.size(); ++i) x[i] += box(rng);
      const auto report = finite_difference_check(*tp.problem, x, 1e-6);
      CHECK_MESSAGE(report.gradient <= 1e-5, tp.key);
      CHECK_MESSAGE(report.jacobian <= 1e-5, tp.key);
    }
  }
}

TEST_CASE("each evaluator increments exactly one counter by its weight") {
  auto problem = make_logistic_problem(
      make_logistic_spec(synthetic_classification(40, 6, 1), {.linear_constraints = 2}, 1));
  Oracle oracle(problem);
  const Vector x = Vector::Constant(6, 0.1);
  const std::vector<int> quarter{0, 5, 17, 30, 31, 32, 33, 39, 2, 3};

  auto delta = [&](auto&& call) {
    const OracleCounters before = oracle.counters();
    call();
    return oracle.counters() - before;
  };
  auto only = [](const OracleCounters& d, double OracleCounters::*field, double w) {
    OracleCounters expected;
    expected.*field = w;
    CHECK(d.function == expected.function);
    CHECK(d.gradient == expected.gradient);
    CHECK(d.hessian == expected.hessian);
    CHECK(d.constraint == expected.constraint);
    CHECK(d.jacobian == expected.jacobian);
    CHECK(d.constraint_hessian == expected.constraint_hessian);
  };
  only(delta([&] { oracle.f(x); }), &OracleCounters::function, 1);
  only(delta([&] { oracle.g(x); }), &OracleCounters::gradient, 1);
  only(delta([&] { oracle.H(x); }), &OracleCounters::hessian, 1);
  only(delta([&] { oracle.Hv(x, x); }), &OracleCounters::hessian, 1);
  only(delta([&] { oracle.c(x); }), &OracleCounters::constraint, 1);
  only(delta([&] { oracle.J(x); }), &OracleCounters::jacobian, 1);
  only(delta([&] { oracle.constraint_hessians(x); }), &OracleCounters::constraint_hessian, 1);
  only(delta([&] { oracle.sample_f(x, quarter); }), &OracleCounters::function, 0.25);
  only(delta([&] { oracle.sample_g(x, quarter); }), &OracleCounters::gradient, 0.25);
  only(delta([&] { oracle.sample_H(x, quarter); }), &OracleCounters::hessian, 0.25);
}

TEST_CASE("dimension checks reject mismatched primal-dual pairs") {
  const TestProblem tp = maratos_counterexample();
  CHECK_NOTHROW(check_dimensions(*tp.problem, {vec({1, 0}), vec({0})}));
  CHECK_THROWS_AS(check_dimensions(*tp.problem, {vec({1, 0, 0}), vec({0})}), DimensionError);
  CHECK_THROWS_AS(check_dimensions(*tp.problem, {vec({1, 0}), vec({0, 1})}), DimensionError);
}

TEST_CASE("sampled evaluation of a non-finite-sum problem is rejected") {
  Oracle oracle(maratos_counterexample().problem);
  const std::vector<int> idx{0};
  CHECK(oracle.finite_sum() == nullptr);
  CHECK_THROWS(oracle.sample_f(vec({1, 0}), idx));
}

TEST_CASE("deterministic view forwards values and hides the finite sum") {
  auto problem = make_logistic_problem(
      make_logistic_spec(synthetic_classification(30, 5, 2), {.linear_constraints = 2}, 4));
  auto view = deterministic_view(problem);
  CHECK(dynamic_cast<const FiniteSumProblem*>(view.get()) == nullptr);
  const Vector x = Vector::LinSpaced(5, -0.3, 0.4);
  CHECK(view->objective(x) == problem->objective(x));
  CHECK(view->gradient(x) == problem->gradient(x));
  CHECK(view->hessian(x) == problem->hessian(x));
  CHECK(view->constraints(x) == problem->constraints(x));
  CHECK(view->jacobian(x) == problem->jacobian(x));
  CHECK(view->constraint_hessian(x, 2) == problem->constraint_hessian(x, 2));
}

}  // TEST_SUITE
