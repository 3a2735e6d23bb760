#pragma once

#include <memory>
#include <string>
#include <vector>

#include "msqp/solver.hpp"

namespace msqp {

enum class Method { ours, sqp_l1, second_order_correction, watchdog, auglag };

/// `ours`, `sqp-l1`, `soc`, `watchdog`, `auglag`.
std::string to_string(Method method);
/// Throws ConfigError for unknown keys.
Method parse_method(const std::string& key);
std::vector<std::string> method_keys();

/// ℓ1-merit SQP that backtracks on the classical condition every iteration.
SolveOutcome solve_sqp_l1(std::shared_ptr<const Problem> problem,
                          const StartSpec& start, const SolverConfig& config);

enum class CorrectionRule {
  /// d̂ = −Jᵀ(JJᵀ)⁻¹c(x + d), the minimum-norm correction.
  least_norm,
  /// d̂ = 0; reproduces the ℓ1 method, kept for equivalence testing.
  none
};

/**
 * Second-order correction: when the unit step fails the classical test,
 * searches the arc x + αd + α²d̂ with the same test.
 */
SolveOutcome solve_second_order_correction(
    std::shared_ptr<const Problem> problem, const StartSpec& start,
    const SolverConfig& config,
    CorrectionRule rule = CorrectionRule::least_norm);

/**
 * Watchdog. A failed unit step anchors the current iterate and starts a run
 * of up to `watchdog_window` unconditional unit steps. A step ending with
 * φ(x, τ) ≤ φ(x_anchor, τ) − η Δl_anchor releases the anchor; otherwise the
 * run restarts from the anchor with a backtracking search along its
 * direction.
 */
SolveOutcome solve_watchdog(std::shared_ptr<const Problem> problem,
                            const StartSpec& start, const SolverConfig& config);

/**
 * SQP globalized with Φ_r(x, y) = f + yᵀc + (r/2)‖c‖². The penalty r doubles
 * until the directional derivative along (d, δ) is ≤ −1e-8‖(d, δ)‖² (capped
 * at auglag_penalty_cap); steps are w + α(d, δ) with Armijo backtracking.
 */
SolveOutcome solve_auglag_merit(std::shared_ptr<const Problem> problem,
                                const StartSpec& start,
                                const SolverConfig& config);

SolveOutcome run_method(Method method, std::shared_ptr<const Problem> problem,
                        const StartSpec& start, const SolverConfig& config);

}  // namespace msqp
