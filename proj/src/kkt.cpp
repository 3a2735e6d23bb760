#include "msqp/kkt.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <lapacke.h>

#include "msqp/errors.hpp"

namespace msqp {

Vector KktSystem::rhs() const {
  Vector r(n() + m());
  r << rhs_top, rhs_bottom;
  return r;
}

Matrix KktSystem::block_matrix() const {
  const int n = this->n();
  const int m = this->m();
  Matrix K = Matrix::Zero(n + m, n + m);
  K.topLeftCorner(n, n) = hessian;
  K.topRightCorner(n, m) = jacobian.transpose();
  K.bottomLeftCorner(m, n) = jacobian;
  return K;
}

Vector KktSystem::apply(const Vector& v) const {
  const int n = this->n();
  const int m = this->m();
  if (v.size() != n + m) throw DimensionError("operand has the wrong size");
  Vector out(n + m);
  out.head(n).noalias() = hessian * v.head(n);
  out.head(n).noalias() += jacobian.transpose() * v.tail(m);
  out.tail(m).noalias() = jacobian * v.head(n);
  return out;
}

double KktSolution::residual_norm_inf() const {
  double r = residual_top.size() ? residual_top.lpNorm<Eigen::Infinity>() : 0.0;
  if (residual_bottom.size())
    r = std::max(r, residual_bottom.lpNorm<Eigen::Infinity>());
  return r;
}

void check_licq(const Matrix& J) {
  if (J.rows() == 0) return;
  if (J.rows() > J.cols())
    throw LicqFailure("more constraints than variables");
  const Vector s = Eigen::JacobiSVD<Matrix>(J).singularValues();
  if (!s.allFinite()) throw LicqFailure("non-finite constraint Jacobian");
  const double smax = s.maxCoeff();
  const double smin = s.minCoeff();
  if (!(smin > 1e-12 * smax))
    throw LicqFailure("constraint Jacobian is numerically rank deficient");
}

KktSystem assemble(Matrix W, Matrix J, const Vector& lagrangian_gradient,
                   const Vector& c) {
  if (W.rows() != W.cols() || J.cols() != W.rows() ||
      lagrangian_gradient.size() != W.rows() || c.size() != J.rows())
    throw DimensionError("inconsistent KKT blocks");
  check_licq(J);
  KktSystem system;
  system.hessian = std::move(W);
  system.jacobian = std::move(J);
  system.rhs_top = -lagrangian_gradient;
  system.rhs_bottom = -c;
  return system;
}

KktSystem assemble(Oracle& oracle, const PrimalDual& w) {
  check_dimensions(oracle.problem(), w);
  Matrix W = lagrangian_hessian(oracle, w);
  Vector g = oracle.g(w.x);
  Matrix J = oracle.J(w.x);
  Vector c = oracle.c(w.x);
  const Vector lg = g + J.transpose() * w.y;
  return assemble(std::move(W), std::move(J), lg, c);
}

Matrix null_space_basis(const Matrix& J) {
  const Eigen::Index n = J.cols();
  const Eigen::Index m = J.rows();
  if (m == 0) return Matrix::Identity(n, n);
  Eigen::HouseholderQR<Matrix> qr(J.transpose());
  const Matrix Q = qr.householderQ() * Matrix::Identity(n, n);
  return Q.rightCols(n - m);
}

double reduced_hessian_min_eigenvalue(const Matrix& W, const Matrix& J) {
  const Matrix Z = null_space_basis(J);
  if (Z.cols() == 0) return std::numeric_limits<double>::infinity();
  Matrix R = Z.transpose() * W * Z;
  R = 0.5 * (R + R.transpose());
  return Eigen::SelfAdjointEigenSolver<Matrix>(R, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .minCoeff();
}

KktSystem regularize(KktSystem system, const RegularizationConfig& config) {
  if (!(config.zeta_min > 0) || !(config.lambda0 > 0))
    throw std::invalid_argument("regularization constants must be positive");
  const Matrix Z = null_space_basis(system.jacobian);
  if (Z.cols() == 0) return system;

  Matrix R = Z.transpose() * system.hessian * Z;
  R = 0.5 * (R + R.transpose());
  const double base = Eigen::SelfAdjointEigenSolver<Matrix>(
                          R, Eigen::EigenvaluesOnly)
                          .eigenvalues()
                          .minCoeff();
  if (!std::isfinite(base))
    throw IllPosedSubproblem("reduced Hessian is not finite");
  if (base >= config.zeta_min) return system;

  // Z has orthonormal columns, so the shift moves every reduced eigenvalue
  // by exactly λ.
  double lambda = config.lambda0;
  while (base + lambda < config.zeta_min) {
    lambda *= 2;
    if (lambda > config.lambda_cap)
      throw IllPosedSubproblem("regularization exceeded its cap");
  }
  system.hessian.diagonal().array() += lambda;
  system.regularization += lambda;
  return system;
}

KktSolution solve_dense(const KktSystem& system) {
  const int n = system.n();
  const int m = system.m();
  const int N = n + m;
  Matrix K = system.block_matrix();
  Vector sol = system.rhs();
  if (!K.allFinite() || !sol.allFinite())
    throw SingularSystem("non-finite KKT data");

  std::vector<lapack_int> pivots(N);
  const lapack_int info =
      LAPACKE_dsysv(LAPACK_COL_MAJOR, 'L', N, 1, K.data(), N, pivots.data(),
                    sol.data(), N);
  if (info != 0 || !sol.allFinite())
    throw SingularSystem("symmetric indefinite factorization failed");

  KktSolution out;
  out.d = sol.head(n);
  out.delta = sol.tail(m);
  out.kind = LinearSolverKind::dense;
  const Vector res = system.apply(sol) - system.rhs();
  out.residual_top = res.head(n);
  out.residual_bottom = res.tail(m);
  return out;
}

DirectionSplit decompose_direction(const KktSystem& system,
                                   const KktSolution& solution) {
  const Matrix& J = system.jacobian;
  DirectionSplit split;
  if (J.rows() == 0) {
    split.normal = Vector::Zero(solution.d.size());
  } else {
    const Matrix JJt = J * J.transpose();
    // rhs_bottom holds −c.
    split.normal = J.transpose() * JJt.ldlt().solve(system.rhs_bottom);
  }
  split.tangential = solution.d - split.normal;
  return split;
}

}  // namespace msqp
