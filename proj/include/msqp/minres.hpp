#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "msqp/kkt.hpp"

namespace msqp {

using LinearOperator = std::function<Vector(const Vector&)>;

struct MinresConfig {
  /// Relative tolerance on ‖residual‖_∞ against ‖rhs‖_∞; 1e-12 is "exact".
  double kappa = 1e-12;
  /// 0 means the system dimension.
  int max_iterations = 0;
  double absolute_floor = 1e-12;
  /// Spot-check operator symmetry on random probes before iterating.
  bool validate_symmetry = false;
  std::uint64_t validation_seed = 7;

  void validate() const;
};

struct MinresReport {
  int iterations = 0;
  /// ‖b − A x_t‖_∞ after each iteration t = 1, 2, ...
  std::vector<double> residual_history;
  /// ‖b − A x_t‖₂ after each iteration.
  std::vector<double> residual_history_2norm;
  bool converged = false;
};

struct MinresResult {
  Vector solution;
  MinresReport report;
};

/**
 * Unpreconditioned MINRES (Paige-Saunders) from x₀ = 0. The residual is
 * recomputed as b − A x after every iteration, and the loop stops once
 * ‖b − A x‖_∞ ≤ max(kappa·‖b‖_∞, absolute_floor).
 *
 * Throws ContractViolation for an asymmetric operator in validation mode and
 * NumericalBreakdown when the Lanczos process terminates short of the target.
 */
MinresResult minres_solve(const LinearOperator& apply, const Vector& rhs,
                          const MinresConfig& config);

/// Matrix-free block operator of a KKT system (the system must outlive it).
LinearOperator kkt_operator(const KktSystem& system);

/// Solves a KKT system with MINRES and packages it like a dense solve.
KktSolution solve_minres(const KktSystem& system, const MinresConfig& config,
                         MinresReport* report = nullptr);

/**
 * Geometric mean of successive ratios of the 2-norm residual history.
 * Throws InsufficientData with fewer than two entries.
 */
double measure_contraction(const MinresReport& report);

}  // namespace msqp
