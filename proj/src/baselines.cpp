#include "msqp/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include <Eigen/Cholesky>

#include "engine.hpp"
#include "msqp/errors.hpp"

namespace msqp {

std::string to_string(Method method) {
  switch (method) {
    case Method::ours: return "ours";
    case Method::sqp_l1: return "sqp-l1";
    case Method::second_order_correction: return "soc";
    case Method::watchdog: return "watchdog";
    case Method::auglag: return "auglag";
  }
  return "unknown";
}

std::vector<std::string> method_keys() {
  return {"ours", "sqp-l1", "soc", "watchdog", "auglag"};
}

Method parse_method(const std::string& key) {
  for (Method m : {Method::ours, Method::sqp_l1, Method::second_order_correction,
                   Method::watchdog, Method::auglag})
    if (to_string(m) == key) return m;
  throw ConfigError("unknown method '" + key + "'");
}

namespace {

MeritState initial_merit(const SolverConfig& config) {
  MeritState m;
  m.tau = m.tau_prev = config.tau_init;
  m.sigma = config.sigma;
  m.eps_tau = config.eps_tau;
  return m;
}

// τ update and the merit quantities every ℓ1 method records.
struct MeritStep {
  double tau;
  double phi0;
  double delta_l;
  double eps_A;
};

MeritStep prepare_merit(detail::Engine& eng, detail::IterateModel& model,
                        IterationRecord& rec, MeritState& merit) {
  const Vector& d = model.solution.d;
  merit = update_merit_parameter(merit, model.g, d, rec.dWd, rec.c_l1);
  MeritStep s;
  s.tau = merit.tau;
  s.phi0 = eng.phi_current(model, s.tau);
  s.delta_l = model_reduction(s.tau, model.g, d, model.c);
  s.eps_A = eng.eps_A(model, s.tau);
  rec.tau = s.tau;
  rec.tau_trial = merit.tau_trial;
  rec.phi = s.phi0;
  rec.delta_l = s.delta_l;
  rec.eps_A = s.eps_A;
  return s;
}

// Share of the curvature dᵀWd the penalty floor reserves for the
// multiplier step.
constexpr double kAuglagRho = 0.5;

void store(IterationRecord& rec, const LineSearchResult& ls) {
  rec.alpha = ls.alpha;
  rec.backtracks = ls.backtracks;
  rec.lhs = ls.lhs;
  rec.rhs = ls.rhs;
}

}  // namespace

SolveOutcome solve_sqp_l1(std::shared_ptr<const Problem> problem,
                          const StartSpec& start, const SolverConfig& config) {
  MeritState merit = initial_merit(config);
  auto step = [&](detail::Engine& eng, detail::IterateModel& model,
                  IterationRecord& rec) {
    const SolverConfig& cfg = eng.config();
    const MeritStep m = prepare_merit(eng, model, rec, merit);
    const Vector& x = model.w.x;
    const Vector& d = model.solution.d;
    auto test = [&](double alpha) {
      return classical_sides(eng.phi_at(model, x + alpha * d, m.tau), m.phi0,
                             alpha, m.delta_l, cfg.eta, m.eps_A);
    };
    rec.branch = Branch::classical;
    const LineSearchResult ls = backtrack(test, cfg.nu_alpha, 1.0,
                                          cfg.max_backtracks,
                                          AcceptedCondition::classical);
    store(rec, ls);
    return PrimalDual{x + ls.alpha * d, model.w.y + model.solution.delta};
  };
  return detail::drive("sqp-l1", std::move(problem), start, config, step);
}

SolveOutcome solve_second_order_correction(
    std::shared_ptr<const Problem> problem, const StartSpec& start,
    const SolverConfig& config, CorrectionRule rule) {
  MeritState merit = initial_merit(config);
  auto step = [&](detail::Engine& eng, detail::IterateModel& model,
                  IterationRecord& rec) {
    const SolverConfig& cfg = eng.config();
    const MeritStep m = prepare_merit(eng, model, rec, merit);
    const Vector& x = model.w.x;
    const Vector& d = model.solution.d;
    const PrimalDual unit{x + d, model.w.y + model.solution.delta};

    const ConditionSides first = classical_sides(
        eng.phi_at(model, unit.x, m.tau), m.phi0, 1.0, m.delta_l, cfg.eta,
        m.eps_A);
    if (first.holds()) {
      rec.branch = Branch::unit_classical;
      store(rec, {1.0, 0, AcceptedCondition::unit_classical, first.lhs, first.rhs});
      return unit;
    }

    Vector correction = Vector::Zero(d.size());
    if (rule == CorrectionRule::least_norm && model.J.rows() > 0) {
      const Vector c_unit = eng.oracle().c(unit.x);
      const Matrix JJt = model.J * model.J.transpose();
      correction = -model.J.transpose() * JJt.ldlt().solve(c_unit);
    }
    auto test = [&](double alpha) {
      const Vector xa = x + alpha * d + (alpha * alpha) * correction;
      return classical_sides(eng.phi_at(model, xa, m.tau), m.phi0, alpha,
                             m.delta_l, cfg.eta, m.eps_A);
    };
    rec.branch = Branch::soc_arc;
    const LineSearchResult ls = backtrack(test, cfg.nu_alpha, 1.0,
                                          cfg.max_backtracks,
                                          AcceptedCondition::classical);
    store(rec, ls);
    rec.correction = correction;
    return PrimalDual{x + ls.alpha * d + (ls.alpha * ls.alpha) * correction,
                      model.w.y + model.solution.delta};
  };
  return detail::drive("soc", std::move(problem), start, config, step);
}

SolveOutcome solve_watchdog(std::shared_ptr<const Problem> problem,
                            const StartSpec& start, const SolverConfig& config) {
  struct Anchor {
    detail::IterateModel model;
    int trace_index = 0;
    int relaxed_steps = 0;
  };
  MeritState merit = initial_merit(config);
  std::optional<Anchor> anchor;

  auto step = [&](detail::Engine& eng, detail::IterateModel& model,
                  IterationRecord& rec) -> PrimalDual {
    const SolverConfig& cfg = eng.config();
    const MeritStep m = prepare_merit(eng, model, rec, merit);
    const Vector& x = model.w.x;
    const Vector& d = model.solution.d;
    const PrimalDual unit{x + d, model.w.y + model.solution.delta};
    const double phi_unit = eng.phi_at(model, unit.x, m.tau);

    if (!anchor) {
      const ConditionSides s =
          classical_sides(phi_unit, m.phi0, 1.0, m.delta_l, cfg.eta, m.eps_A);
      if (s.holds()) {
        rec.branch = Branch::unit_classical;
        store(rec, {1.0, 0, AcceptedCondition::unit_classical, s.lhs, s.rhs});
        return unit;
      }
      anchor = Anchor{model, model.k, 0};
    }

    // Progress of the relaxed step measured against the anchor, both at the
    // current merit parameter.
    const detail::IterateModel& a = anchor->model;
    const Vector& da = a.solution.d;
    const double phi_a = eng.phi_current(a, m.tau);
    const double delta_l_a = model_reduction(m.tau, a.g, da, a.c);
    const double eps_a = eng.eps_A(a, m.tau);
    const ConditionSides progress =
        classical_sides(phi_unit, phi_a, 1.0, delta_l_a, cfg.eta, eps_a);
    ++anchor->relaxed_steps;

    if (progress.holds() || anchor->relaxed_steps < cfg.watchdog_window) {
      rec.branch = Branch::watchdog_relaxed;
      store(rec, {1.0, 0, AcceptedCondition::classical, progress.lhs, progress.rhs});
      rec.anchor = anchor->trace_index;
      if (progress.holds()) anchor.reset();
      return unit;
    }

    // Window exhausted: back to the anchor with a strict search along its
    // direction.
    auto test = [&](double alpha) {
      return classical_sides(eng.phi_at(a, a.w.x + alpha * da, m.tau), phi_a,
                             alpha, delta_l_a, cfg.eta, eps_a);
    };
    const LineSearchResult ls = backtrack(test, cfg.nu_alpha, 1.0,
                                          cfg.max_backtracks,
                                          AcceptedCondition::classical);
    rec.branch = Branch::watchdog_restart;
    store(rec, ls);
    rec.anchor = anchor->trace_index;
    PrimalDual next{a.w.x + ls.alpha * da, a.w.y + a.solution.delta};
    anchor.reset();
    return next;
  };
  return detail::drive("watchdog", std::move(problem), start, config, step);
}

SolveOutcome solve_auglag_merit(std::shared_ptr<const Problem> problem,
                                const StartSpec& start,
                                const SolverConfig& config) {
  // One penalty per constraint. Each iteration may shrink an oversized
  // penalty by min(1, k/√r_j) and then raises it to the floor that makes
  // the search direction a descent direction for the merit in (x, y).
  Vector r;
  auto step = [&](detail::Engine& eng, detail::IterateModel& model,
                  IterationRecord& rec) {
    const SolverConfig& cfg = eng.config();
    const Vector& x = model.w.x;
    const Vector& y = model.w.y;
    const Vector& d = model.solution.d;
    const Vector& delta = model.solution.delta;
    const Eigen::Index m = model.c.size();
    if (r.size() != m) r = Vector::Constant(m, cfg.auglag_penalty_init);

    const double k = static_cast<double>(model.k + 1);
    for (Eigen::Index j = 0; j < m; ++j) {
      const double shrink = std::min(1.0, k / std::sqrt(r[j]));
      double floor = 0;
      if (rec.dWd > 0)
        floor = 2.0 * static_cast<double>(m) * delta[j] * delta[j] /
                ((1 - kAuglagRho) * rec.dWd);
      r[j] = std::min(std::max(shrink * r[j], floor), cfg.auglag_penalty_cap);
    }

    auto Phi = [&](double f, const Vector& c, const Vector& yy) {
      return f + yy.dot(c) + 0.5 * c.dot(r.cwiseProduct(c));
    };
    const double step_sq = d.squaredNorm() + delta.squaredNorm();
    auto directional = [&] {
      return (model.lagrangian_gradient + model.J.transpose() * r.cwiseProduct(model.c))
                 .dot(d) +
             model.c.dot(delta);
    };
    double dd = directional();
    while (dd > -1e-8 * step_sq && r.minCoeff() < cfg.auglag_penalty_cap) {
      r = (2 * r).cwiseMin(cfg.auglag_penalty_cap);
      dd = directional();
    }
    const double Phi0 = Phi(model.f, model.c, y);

    auto test = [&](double alpha) {
      const Vector xa = x + alpha * d;
      const double fa = eng.objective_at(model, xa);
      const Vector ca = eng.oracle().c(xa);
      return ConditionSides{Phi(fa, ca, y + alpha * delta),
                            Phi0 + cfg.eta * alpha * dd};
    };
    const LineSearchResult ls = backtrack(test, cfg.nu_alpha, 1.0,
                                          cfg.max_backtracks,
                                          AcceptedCondition::classical);
    rec.branch = Branch::auglag;
    rec.phi = Phi0;
    rec.delta_l = -dd;
    rec.penalty = m ? r.maxCoeff() : 0.0;
    store(rec, ls);
    return PrimalDual{x + ls.alpha * d, y + ls.alpha * delta};
  };
  return detail::drive("auglag", std::move(problem), start, config, step);
}

SolveOutcome run_method(Method method, std::shared_ptr<const Problem> problem,
                        const StartSpec& start, const SolverConfig& config) {
  switch (method) {
    case Method::ours: return solve(std::move(problem), start, config);
    case Method::sqp_l1: return solve_sqp_l1(std::move(problem), start, config);
    case Method::second_order_correction:
      return solve_second_order_correction(std::move(problem), start, config);
    case Method::watchdog: return solve_watchdog(std::move(problem), start, config);
    case Method::auglag: return solve_auglag_merit(std::move(problem), start, config);
  }
  throw ConfigError("unknown method");
}

}  // namespace msqp
