#pragma once

#include "msqp/problem.hpp"

namespace msqp {

/**
 * Newton-KKT system
 *
 *   [ W  Jᵀ ] [ d ]     [ g + Jᵀy ]
 *   [ J  0  ] [ δ ] = − [    c    ]
 *
 * stored blockwise. `regularization` is the total λ already added to W.
 */
struct KktSystem {
  Matrix hessian;
  Matrix jacobian;
  Vector rhs_top;
  Vector rhs_bottom;
  double regularization = 0;

  int n() const { return static_cast<int>(hessian.rows()); }
  int m() const { return static_cast<int>(jacobian.rows()); }
  Vector rhs() const;
  /// Dense (n+m)×(n+m) block matrix; for tests and small problems.
  Matrix block_matrix() const;
  /// Block product computed without forming the block matrix.
  Vector apply(const Vector& v) const;
};

enum class LinearSolverKind { dense, minres };

/// Solution of a KKT system plus the residuals (ρ, r) = K·(d, δ) − rhs.
struct KktSolution {
  Vector d;
  Vector delta;
  Vector residual_top;
  Vector residual_bottom;
  LinearSolverKind kind = LinearSolverKind::dense;
  int iterations = 0;

  double residual_norm_inf() const;
};

struct RegularizationConfig {
  /// Required smallest eigenvalue of the reduced Hessian ZᵀWZ.
  double zeta_min = 1e-8;
  /// First nonzero shift; later shifts double it.
  double lambda0 = 1e-6;
  double lambda_cap = 1e8;
};

/// Throws LicqFailure when σ_min(J) ≤ 1e-12·σ_max(J).
void check_licq(const Matrix& J);

/// Builds the system from an already evaluated W, J, g + Jᵀy and c.
KktSystem assemble(Matrix W, Matrix J, const Vector& lagrangian_gradient,
                   const Vector& c);

/// Builds the system from exact oracle evaluations at w.
KktSystem assemble(Oracle& oracle, const PrimalDual& w);

/// Orthonormal basis of Null(J) from a full QR factorization of Jᵀ.
Matrix null_space_basis(const Matrix& J);

/// λ_min(ZᵀWZ); +∞ when the null space is trivial.
double reduced_hessian_min_eigenvalue(const Matrix& W, const Matrix& J);

/**
 * Adds the smallest shift in {0, λ₀, 2λ₀, 4λ₀, ...} to W so that the reduced
 * Hessian has λ_min ≥ zeta_min. The applied shift accumulates in
 * `regularization`. Throws IllPosedSubproblem past the cap.
 */
KktSystem regularize(KktSystem system, const RegularizationConfig& config = {});

/// LDLᵀ (Bunch-Kaufman) solve. Throws SingularSystem on a zero pivot.
KktSolution solve_dense(const KktSystem& system);

/// d = u + v with u ∈ Null(J) and v = −Jᵀ(JJᵀ)⁻¹c ∈ Range(Jᵀ).
struct DirectionSplit {
  Vector tangential;
  Vector normal;
};

DirectionSplit decompose_direction(const KktSystem& system,
                                   const KktSolution& solution);

}  // namespace msqp
