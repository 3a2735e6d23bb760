#pragma once

#include <functional>
#include <limits>
#include <string>

#include "msqp/problem.hpp"

namespace msqp {

/// ℓ1 merit parameter τ and its update constants.
struct MeritState {
  double tau = 1.0;
  double tau_prev = 1.0;
  /// Last trial value; +∞ when the keep branch is forced.
  double tau_trial = std::numeric_limits<double>::infinity();
  double sigma = 0.5;
  double eps_tau = 1e-2;
};

/// φ(x, τ) = τ f + ‖c‖₁.
double merit_phi(double f, const Vector& c, double tau);

/// Δl = −τ gᵀd + ‖c‖₁.
double model_reduction(double tau, const Vector& g, const Vector& d,
                       const Vector& c);

/// (1−σ)‖c‖₁ / (gᵀd + max(dᵀWd, 0)), or +∞ if the denominator is ≤ 0.
double trial_merit_parameter(double gd, double dWd, double c_l1, double sigma);

/// Keeps τ if τ ≤ τ_trial, otherwise sets τ = (1−ε_τ)τ_trial.
MeritState update_merit_parameter(MeritState state, const Vector& g,
                                  const Vector& d, double dWd, double c_l1);

/// Stand-ins for the analysis constants entering the relaxation term.
struct BoundSurrogates {
  /// Product of the pseudo-inverse Jacobian bound and the constraint bound.
  double jacobian_pinv_times_constraint = 1.0;
  /// Reduced-Hessian curvature lower bound.
  double zeta = 1.0;
  double gradient_bound = 1.0;
  double hessian_bound = 1.0;
};

struct RelaxationBudget {
  double eps_f = 0;
  double eps_g = 0;
  BoundSurrogates constants;
};

/**
 * ε_A = τ (K + (g_b + ε_g + W_b K)/ζ) ε_g + 2τ ε_f with K the Jacobian
 * surrogate, g_b, W_b the gradient and Hessian bounds. Zero when
 * ε_f = ε_g = 0.
 */
double relaxation_eps_A(const RelaxationBudget& budget, double tau);

/// Both sides of a sufficient-decrease inequality lhs ≤ rhs.
struct ConditionSides {
  double lhs = 0;
  double rhs = 0;

  bool holds() const { return lhs <= rhs; }
};

/// lhs = φ_trial, rhs = φ_current − η α Δl + ε_A.
ConditionSides classical_sides(double phi_trial, double phi_current,
                               double alpha, double delta_l, double eta,
                               double eps_A);

bool classical_condition(double phi_trial, double phi_current, double alpha,
                         double delta_l, double eta, double eps_A);

/// Classical rhs plus ½α²τ dᵀHd + ½α² Σ|dᵀ∇²cᵢd|.
ConditionSides modified_sides(double phi_trial, double phi_current,
                              double alpha, double delta_l, double eta,
                              double tau, double dHd, double sum_abs_dCid,
                              double eps_A);

bool modified_condition(double phi_trial, double phi_current, double alpha,
                        double delta_l, double eta, double tau, double dHd,
                        double sum_abs_dCid, double eps_A);

enum class AcceptedCondition { classical, modified, unit_classical };

std::string to_string(AcceptedCondition condition);

struct LineSearchResult {
  double alpha = 1;
  int backtracks = 0;
  AcceptedCondition condition = AcceptedCondition::classical;
  double lhs = 0;
  double rhs = 0;
};

/// Evaluates an acceptance test at step size α.
using StepTest = std::function<ConditionSides(double alpha)>;

/**
 * Tries α = alpha0·ν^j for j = 0, 1, ..., max_backtracks and returns the
 * first passing step. Throws LineSearchFailure when none passes.
 */
LineSearchResult backtrack(const StepTest& test, double nu_alpha,
                           double alpha0 = 1.0, int max_backtracks = 60,
                           AcceptedCondition condition =
                               AcceptedCondition::classical);

}  // namespace msqp
