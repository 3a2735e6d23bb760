#include "msqp/solver.hpp"

#include <cmath>

#include "engine.hpp"
#include "msqp/errors.hpp"

namespace msqp {

void SolverConfig::validate() const {
  auto open_unit = [](double v, const char* name) {
    if (!(v > 0 && v < 1)) throw ConfigError(std::string(name) + " must lie in (0, 1)");
  };
  if (!(tau_init > 0)) throw ConfigError("tau_init must be positive");
  open_unit(eta, "eta");
  open_unit(nu_alpha, "nu_alpha");
  open_unit(nu_gamma, "nu_gamma");
  open_unit(sigma, "sigma");
  open_unit(eps_tau, "eps_tau");
  if (!(gamma0_factor > 0)) throw ConfigError("gamma0_factor must be positive");
  if (max_iterations < 0) throw ConfigError("max_iterations must be >= 0");
  if (!(termination_tol > 0)) throw ConfigError("termination_tol must be positive");
  if (max_backtracks < 0) throw ConfigError("max_backtracks must be >= 0");
  if (!(function_eval_budget > 0) || !(hessian_eval_budget > 0) ||
      !(minres_iteration_budget > 0))
    throw ConfigError("budgets must be positive");
  if (watchdog_window < 1) throw ConfigError("watchdog_window must be >= 1");
  if (!(auglag_penalty_init > 0) || !(auglag_penalty_cap >= auglag_penalty_init))
    throw ConfigError("augmented-Lagrangian penalty settings are invalid");
  minres.validate();
  // Key syntax only; sizes are checked against N when a run starts.
  for (const std::string* key : {&schedule_f, &schedule_g, &schedule_H})
    parse_schedule(*key, 1 << 20, 1);
}

std::string to_string(Branch branch) {
  switch (branch) {
    case Branch::classical_large_d: return "classical_large_d";
    case Branch::unit_classical: return "unit_classical";
    case Branch::modified: return "modified";
    case Branch::classical: return "classical";
    case Branch::soc_arc: return "soc_arc";
    case Branch::watchdog_relaxed: return "watchdog_relaxed";
    case Branch::watchdog_restart: return "watchdog_restart";
    case Branch::auglag: return "auglag";
  }
  return "unknown";
}

std::optional<Branch> parse_branch(std::string_view text) {
  for (Branch b : {Branch::classical_large_d, Branch::unit_classical,
                   Branch::modified, Branch::classical, Branch::soc_arc,
                   Branch::watchdog_relaxed, Branch::watchdog_restart,
                   Branch::auglag})
    if (to_string(b) == text) return b;
  return std::nullopt;
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::iteration_limit: return "iteration_limit";
    case SolveStatus::evaluation_limit: return "evaluation_limit";
    case SolveStatus::licq_failure: return "licq_failure";
    case SolveStatus::linesearch_failure: return "linesearch_failure";
    case SolveStatus::ill_posed: return "ill_posed";
    case SolveStatus::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

bool termination_check(const Vector& g, const Matrix& J, const Vector& y,
                       const Vector& c, const TerminationReference& reference,
                       double tol) {
  const double stationarity = (g + J.transpose() * y).lpNorm<Eigen::Infinity>();
  const double feasibility = c.size() ? c.lpNorm<Eigen::Infinity>() : 0.0;
  return stationarity <= tol * std::max(1.0, reference.stationarity0) &&
         feasibility <= tol * std::max(1.0, reference.feasibility0);
}

SolveOutcome solve(std::shared_ptr<const Problem> problem,
                   const StartSpec& start, const SolverConfig& config) {
  MeritState merit;
  merit.tau = merit.tau_prev = config.tau_init;
  merit.sigma = config.sigma;
  merit.eps_tau = config.eps_tau;
  double gamma = 0;

  auto step = [&](detail::Engine& eng, detail::IterateModel& model,
                  IterationRecord& rec) {
    const SolverConfig& cfg = eng.config();
    const Vector& x = model.w.x;
    const Vector& d = model.solution.d;

    merit = update_merit_parameter(merit, model.g, d, rec.dWd, rec.c_l1);
    const double tau = merit.tau;
    const double delta_l = model_reduction(tau, model.g, d, model.c);
    const double phi0 = eng.phi_current(model, tau);
    const double eps_A = eng.eps_A(model, tau);
    if (model.k == 0) gamma = cfg.gamma0_factor * rec.d_norm;

    rec.tau = tau;
    rec.tau_trial = merit.tau_trial;
    rec.phi = phi0;
    rec.delta_l = delta_l;
    rec.eps_A = eps_A;
    rec.gamma = gamma;

    std::optional<double> phi_unit;
    auto phi_trial = [&](double alpha) {
      if (alpha == 1.0 && phi_unit) return *phi_unit;
      const double v = eng.phi_at(model, x + alpha * d, tau);
      if (alpha == 1.0) phi_unit = v;
      return v;
    };
    auto classical = [&](double alpha) {
      return classical_sides(phi_trial(alpha), phi0, alpha, delta_l, cfg.eta,
                             eps_A);
    };

    LineSearchResult ls;
    if (rec.d_norm > gamma) {
      rec.branch = Branch::classical_large_d;
      ls = backtrack(classical, cfg.nu_alpha, 1.0, cfg.max_backtracks,
                     AcceptedCondition::classical);
    } else if (const ConditionSides unit = classical(1.0); unit.holds()) {
      rec.branch = Branch::unit_classical;
      ls = {1.0, 0, AcceptedCondition::unit_classical, unit.lhs, unit.rhs};
    } else {
      rec.branch = Branch::modified;
      auto modified = [&](double alpha) {
        return modified_sides(phi_trial(alpha), phi0, alpha, delta_l, cfg.eta,
                              tau, rec.dHd, rec.sum_abs_dCid, eps_A);
      };
      ls = backtrack(modified, cfg.nu_alpha, 1.0, cfg.max_backtracks,
                     AcceptedCondition::modified);
      gamma *= cfg.nu_gamma;
    }
    rec.alpha = ls.alpha;
    rec.backtracks = ls.backtracks;
    rec.lhs = ls.lhs;
    rec.rhs = ls.rhs;
    return PrimalDual{x + ls.alpha * d, model.w.y + model.solution.delta};
  };
  return detail::drive("ours", std::move(problem), start, config, step);
}

std::vector<double> error_ratios(std::span<const PrimalDual> iterates,
                                 const PrimalDual& reference) {
  std::vector<double> ratios;
  for (std::size_t i = 0; i + 1 < iterates.size(); ++i) {
    const double prev = (iterates[i].stacked() - reference.stacked()).norm();
    const double next = (iterates[i + 1].stacked() - reference.stacked()).norm();
    ratios.push_back(next / prev);
  }
  return ratios;
}

std::vector<double> superlinear_diagnostic(const SolveOutcome& outcome,
                                           const PrimalDual& reference) {
  std::vector<PrimalDual> iterates;
  iterates.reserve(outcome.trace.size() + 1);
  for (const IterationRecord& rec : outcome.trace) {
    if (rec.x.size() == 0)
      throw std::invalid_argument("trace was recorded without iterates");
    iterates.push_back({rec.x, rec.y});
  }
  iterates.push_back(outcome.final);
  return error_ratios(iterates, reference);
}

UnitStep unit_step(Oracle& oracle, const PrimalDual& w,
                   const SolverConfig& config) {
  KktSystem system = regularize(assemble(oracle, w), config.regularization);
  UnitStep out;
  if (config.linear_solver == LinearSolverKind::minres) {
    out.solution = solve_minres(system, config.minres, &out.report);
  } else {
    out.solution = solve_dense(system);
  }
  out.next = PrimalDual{w.x + out.solution.d, w.y + out.solution.delta};
  return out;
}

}  // namespace msqp
