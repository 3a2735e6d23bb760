#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "msqp/kkt.hpp"
#include "msqp/merit.hpp"
#include "msqp/minres.hpp"
#include "msqp/sampling.hpp"
#include "msqp/suite.hpp"

namespace msqp {

/// Source of the Hessian block of W: the (possibly subsampled) objective
/// Hessian plus constraint curvature, or the identity (first-order variant).
enum class HessianModel { second_order, identity };

struct SolverConfig {
  double tau_init = 1.0;
  double eta = 1e-4;
  double nu_alpha = 0.5;
  double nu_gamma = 0.7;
  /// γ₀ = gamma0_factor·‖d₀‖.
  double gamma0_factor = 0.999;
  double sigma = 0.5;
  double eps_tau = 1e-2;
  int max_iterations = 100;
  double termination_tol = 1e-6;
  int max_backtracks = 60;

  RegularizationConfig regularization;
  LinearSolverKind linear_solver = LinearSolverKind::dense;
  MinresConfig minres;
  HessianModel hessian_model = HessianModel::second_order;

  /// Schedule keys (see parse_schedule); non-`full` needs a finite sum.
  std::string schedule_f = "full";
  std::string schedule_g = "full";
  std::string schedule_H = "full";
  /// Unset: estimated from the components at the start point.
  std::optional<BoundConstants> bound_constants;
  BoundSurrogates surrogates;
  std::uint64_t seed = 0;

  /// Budgets in full-pass units; exceeding one ends the run.
  double function_eval_budget = std::numeric_limits<double>::infinity();
  double hessian_eval_budget = std::numeric_limits<double>::infinity();
  double minres_iteration_budget = std::numeric_limits<double>::infinity();

  int watchdog_window = 5;
  double auglag_penalty_init = 1e6;
  double auglag_penalty_cap = 1e12;

  /// Keep x, y, d, δ in every trace row.
  bool record_iterates = true;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

enum class Branch {
  classical_large_d,
  unit_classical,
  modified,
  classical,
  soc_arc,
  watchdog_relaxed,
  watchdog_restart,
  auglag
};

std::string to_string(Branch branch);
std::optional<Branch> parse_branch(std::string_view text);

enum class SolveStatus {
  converged,
  iteration_limit,
  evaluation_limit,
  licq_failure,
  linesearch_failure,
  ill_posed,
  numerical_failure
};

std::string to_string(SolveStatus status);

/// One accepted iteration. NaN marks quantities a method does not use.
struct IterationRecord {
  int k = 0;
  Vector x;
  Vector y;
  Vector d;
  Vector delta;
  /// Arc correction of the second-order-correction method; empty otherwise.
  Vector correction;
  double d_norm = 0;
  double gamma = std::numeric_limits<double>::quiet_NaN();
  double tau = std::numeric_limits<double>::quiet_NaN();
  double tau_trial = std::numeric_limits<double>::quiet_NaN();
  double alpha = 1;
  Branch branch = Branch::classical;
  int backtracks = 0;
  double feasibility = 0;
  double stationarity = 0;
  double f = 0;
  double c_l1 = 0;
  /// Merit value at x_k (Φ_r for the augmented-Lagrangian method).
  double phi = 0;
  double delta_l = 0;
  double dWd = 0;
  double dHd = 0;
  double sum_abs_dCid = 0;
  double eps_A = 0;
  /// Sides of the inequality that decided the step.
  double lhs = 0;
  double rhs = 0;
  int size_f = 0;
  int size_g = 0;
  int size_H = 0;
  OracleCounters evaluations;
  double regularization = 0;
  int minres_iterations = 0;
  double penalty = std::numeric_limits<double>::quiet_NaN();
  /// Trace index of the watchdog anchor for restart rows; −1 otherwise.
  int anchor = -1;
};

struct SolveOutcome {
  std::string method;
  std::string problem;
  SolveStatus status = SolveStatus::iteration_limit;
  std::string message;
  int iterations = 0;
  PrimalDual final;
  double final_objective = 0;
  double final_stationarity = 0;
  double final_feasibility = 0;
  std::vector<IterationRecord> trace;
  OracleCounters counters;
  int minres_iterations = 0;
  double seconds = 0;

  bool converged() const { return status == SolveStatus::converged; }
};

/// Reference scales captured at the start point.
struct TerminationReference {
  double stationarity0 = 0;
  double feasibility0 = 0;
};

/**
 * ‖g + Jᵀy‖_∞ ≤ tol·max(1, stationarity0) and ‖c‖_∞ ≤ tol·max(1,
 * feasibility0).
 */
bool termination_check(const Vector& g, const Matrix& J, const Vector& y,
                       const Vector& c, const TerminationReference& reference,
                       double tol);

/// Modified line-search SQP.
SolveOutcome solve(std::shared_ptr<const Problem> problem,
                   const StartSpec& start, const SolverConfig& config);

/// ‖w_{k+1} − w*‖ / ‖w_k − w*‖ over consecutive iterates.
std::vector<double> error_ratios(std::span<const PrimalDual> iterates,
                                 const PrimalDual& reference);

/**
 * Error ratios over the recorded iterates followed by the final iterate.
 * Requires a trace recorded with record_iterates.
 */
std::vector<double> superlinear_diagnostic(const SolveOutcome& outcome,
                                           const PrimalDual& reference);

/// One full primal-dual step w + (d, δ) with the configured linear solver.
struct UnitStep {
  PrimalDual next;
  KktSolution solution;
  MinresReport report;
};

UnitStep unit_step(Oracle& oracle, const PrimalDual& w,
                   const SolverConfig& config);

}  // namespace msqp
