#pragma once

// Shared fixtures for the unit tests: seeded random systems and small
// hand-written problems whose derivatives are known in closed form.

#include <cmath>
#include <memory>
#include <random>

#include <Eigen/Dense>

#include "msqp/kkt.hpp"
#include "msqp/suite.hpp"

namespace msqp::testing {

inline Matrix random_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix A(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) A(i, j) = normal(rng);
  return A;
}

inline Vector random_vector(std::mt19937_64& rng, int n) {
  return random_matrix(rng, n, 1).col(0);
}

inline Matrix random_symmetric(std::mt19937_64& rng, int n) {
  const Matrix A = random_matrix(rng, n, n);
  return 0.5 * (A + A.transpose());
}

/// Symmetric indefinite W, full-rank J, random right-hand side.
inline KktSystem random_kkt_system(std::mt19937_64& rng, int n, int m) {
  KktSystem s;
  s.hessian = random_symmetric(rng, n);
  s.jacobian = random_matrix(rng, m, n);
  s.rhs_top = random_vector(rng, n);
  s.rhs_bottom = random_vector(rng, m);
  return s;
}

/// Dimensions n ∈ [1, 20], m ∈ [1, min(8, n)].
inline std::pair<int, int> random_dimensions(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nd(1, 20);
  const int n = nd(rng);
  std::uniform_int_distribution<int> md(1, std::min(8, n));
  return {n, md(rng)};
}

/// min ½xᵀQx + qᵀx  s.t.  Ax = b, with Q positive definite.
inline std::shared_ptr<const Problem> quadratic_linear(const Matrix& Q,
                                                       const Vector& q,
                                                       const Matrix& A,
                                                       const Vector& b) {
  FunctionalProblem::Callbacks cb;
  cb.f = [=](const Vector& x) { return 0.5 * x.dot(Q * x) + q.dot(x); };
  cb.g = [=](const Vector& x) -> Vector { return Q * x + q; };
  cb.H = [=](const Vector&) -> Matrix { return Q; };
  cb.c = [=](const Vector& x) -> Vector { return A * x - b; };
  cb.J = [=](const Vector&) -> Matrix { return A; };
  const int n = static_cast<int>(Q.rows());
  cb.C = [=](const Vector&, int) -> Matrix { return Matrix::Zero(n, n); };
  return std::make_shared<FunctionalProblem>("quadratic-linear", n,
                                             static_cast<int>(A.rows()), cb);
}

/**
 * min √(1 + x₁²) + x₂²  s.t.  x₂ = 0. Newton maps x₁ to −x₁³, so from
 * |x₁| > 1 every unit step raises the merit function.
 */
inline std::shared_ptr<const Problem> overshooting_problem() {
  FunctionalProblem::Callbacks cb;
  cb.f = [](const Vector& x) { return std::sqrt(1 + x[0] * x[0]) + x[1] * x[1]; };
  cb.g = [](const Vector& x) -> Vector {
    Vector g(2);
    g << x[0] / std::sqrt(1 + x[0] * x[0]), 2 * x[1];
    return g;
  };
  cb.H = [](const Vector& x) -> Matrix {
    Matrix H = Matrix::Zero(2, 2);
    H(0, 0) = std::pow(1 + x[0] * x[0], -1.5);
    H(1, 1) = 2;
    return H;
  };
  cb.c = [](const Vector& x) -> Vector { return Vector::Constant(1, x[1]); };
  cb.J = [](const Vector&) -> Matrix {
    Matrix J(1, 2);
    J << 0, 1;
    return J;
  };
  cb.C = [](const Vector&, int) -> Matrix { return Matrix::Zero(2, 2); };
  return std::make_shared<FunctionalProblem>("overshoot", 2, 1, cb);
}

inline Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

inline StartSpec start_at(const Vector& x) {
  StartSpec s;
  s.x0 = x;
  return s;
}

inline StartSpec start_at(const Vector& x, const Vector& y) {
  StartSpec s;
  s.x0 = x;
  s.y0 = y;
  s.rule = StartSpec::MultiplierRule::explicit_value;
  return s;
}

}  // namespace msqp::testing
