#include "msqp/merit.hpp"

#include <cmath>
#include <stdexcept>

#include "msqp/errors.hpp"

namespace msqp {

double merit_phi(double f, const Vector& c, double tau) {
  return tau * f + c.lpNorm<1>();
}

double model_reduction(double tau, const Vector& g, const Vector& d,
                       const Vector& c) {
  return -tau * g.dot(d) + c.lpNorm<1>();
}

double trial_merit_parameter(double gd, double dWd, double c_l1, double sigma) {
  const double denom = gd + std::max(dWd, 0.0);
  // At a feasible point the denominator vanishes up to round-off and no
  // finite τ changes the model reduction.
  if (denom <= 0 || c_l1 == 0) return std::numeric_limits<double>::infinity();
  return (1 - sigma) * c_l1 / denom;
}

MeritState update_merit_parameter(MeritState state, const Vector& g,
                                  const Vector& d, double dWd, double c_l1) {
  state.tau_prev = state.tau;
  state.tau_trial = trial_merit_parameter(g.dot(d), dWd, c_l1, state.sigma);
  if (state.tau_prev > state.tau_trial)
    state.tau = (1 - state.eps_tau) * state.tau_trial;
  return state;
}

double relaxation_eps_A(const RelaxationBudget& budget, double tau) {
  if (budget.eps_f < 0 || budget.eps_g < 0)
    throw std::invalid_argument("error bounds must be nonnegative");
  const BoundSurrogates& k = budget.constants;
  const double jk = k.jacobian_pinv_times_constraint;
  const double first =
      tau * (jk + (k.gradient_bound + budget.eps_g + k.hessian_bound * jk) / k.zeta) *
      budget.eps_g;
  return first + 2 * tau * budget.eps_f;
}

ConditionSides classical_sides(double phi_trial, double phi_current,
                               double alpha, double delta_l, double eta,
                               double eps_A) {
  return {phi_trial, phi_current - eta * alpha * delta_l + eps_A};
}

bool classical_condition(double phi_trial, double phi_current, double alpha,
                         double delta_l, double eta, double eps_A) {
  return classical_sides(phi_trial, phi_current, alpha, delta_l, eta, eps_A)
      .holds();
}

ConditionSides modified_sides(double phi_trial, double phi_current,
                              double alpha, double delta_l, double eta,
                              double tau, double dHd, double sum_abs_dCid,
                              double eps_A) {
  ConditionSides s =
      classical_sides(phi_trial, phi_current, alpha, delta_l, eta, eps_A);
  const double a2 = alpha * alpha;
  s.rhs += 0.5 * a2 * tau * dHd + 0.5 * a2 * sum_abs_dCid;
  return s;
}

bool modified_condition(double phi_trial, double phi_current, double alpha,
                        double delta_l, double eta, double tau, double dHd,
                        double sum_abs_dCid, double eps_A) {
  return modified_sides(phi_trial, phi_current, alpha, delta_l, eta, tau, dHd,
                        sum_abs_dCid, eps_A)
      .holds();
}

std::string to_string(AcceptedCondition condition) {
  switch (condition) {
    case AcceptedCondition::classical: return "classical";
    case AcceptedCondition::modified: return "modified";
    case AcceptedCondition::unit_classical: return "unit_classical";
  }
  return "unknown";
}

LineSearchResult backtrack(const StepTest& test, double nu_alpha, double alpha0,
                           int max_backtracks, AcceptedCondition condition) {
  if (!(nu_alpha > 0 && nu_alpha < 1))
    throw std::invalid_argument("nu_alpha must lie in (0, 1)");
  for (int j = 0; j <= max_backtracks; ++j) {
    const double alpha = alpha0 * std::pow(nu_alpha, j);
    const ConditionSides sides = test(alpha);
    if (sides.holds()) return {alpha, j, condition, sides.lhs, sides.rhs};
  }
  throw LineSearchFailure("no acceptable step after " +
                          std::to_string(max_backtracks) + " backtracks");
}

}  // namespace msqp
