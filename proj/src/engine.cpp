#include "engine.hpp"

#include <chrono>
#include <cmath>

#include "msqp/errors.hpp"

namespace msqp::detail {

Engine::Engine(std::shared_ptr<const Problem> problem, const SolverConfig& config)
    : oracle_{std::move(problem)}, config_{config} {
  config_.validate();
  finite_sum_ = oracle_.finite_sum();
  if (finite_sum_) {
    const int N = finite_sum_->num_components();
    const int horizon = config_.max_iterations;
    sched_f_ = parse_schedule(config_.schedule_f, N, horizon);
    sched_g_ = parse_schedule(config_.schedule_g, N, horizon);
    sched_H_ = parse_schedule(config_.schedule_H, N, horizon);
    exact_fg_ = sched_f_->kind() == ScheduleKind::full &&
                sched_g_->kind() == ScheduleKind::full;
  } else if (config_.schedule_f != "full" || config_.schedule_g != "full" ||
             config_.schedule_H != "full") {
    throw ConfigError("sample schedules need a finite-sum problem");
  }
  constants_ = config_.bound_constants;
}

IterateModel Engine::evaluate(const PrimalDual& w, int k) {
  check_dimensions(oracle_.problem(), w);
  IterateModel model;
  model.k = k;
  model.w = w;
  const Vector& x = w.x;
  if (finite_sum_) {
    const int N = finite_sum_->num_components();
    model.size_f = sched_f_->size(k);
    model.size_g = sched_g_->size(k);
    model.size_H = sched_H_->size(k);
    model.S_f = draw_samples(N, model.size_f, config_.seed, k, 0);
    model.S_g = draw_samples(N, model.size_g, config_.seed, k, 1);
    model.S_H = draw_samples(N, model.size_H, config_.seed, k, 2);
    model.f = oracle_.sample_f(x, model.S_f);
    model.g = oracle_.sample_g(x, model.S_g);
    if (!exact_fg_ && !constants_) {
      constants_ = estimate_bound_constants(*finite_sum_, x);
    }
  } else {
    model.size_f = model.size_g = model.size_H = 1;
    model.f = oracle_.f(x);
    model.g = oracle_.g(x);
  }
  model.c = oracle_.c(x);
  model.J = oracle_.J(x);
  model.lagrangian_gradient = model.g + model.J.transpose() * w.y;
  model.stationarity = model.lagrangian_gradient.lpNorm<Eigen::Infinity>();
  model.feasibility = model.c.size() ? model.c.lpNorm<Eigen::Infinity>() : 0.0;
  if (!std::isfinite(model.f) || !model.g.allFinite() || !model.c.allFinite())
    throw NumericalBreakdown("non-finite evaluation at the current iterate");
  return model;
}

void Engine::compute_direction(IterateModel& model) {
  const Vector& x = model.w.x;
  const int n = oracle_.n();
  model.constraint_hessians = oracle_.constraint_hessians(x);
  Matrix W;
  if (config_.hessian_model == HessianModel::identity) {
    model.H = Matrix::Identity(n, n);
    W = Matrix::Identity(n, n);
  } else {
    model.H = finite_sum_ ? oracle_.sample_H(x, model.S_H) : oracle_.H(x);
    W = lagrangian_hessian(model.H, model.constraint_hessians, model.w.y);
  }
  KktSystem system = assemble(std::move(W), model.J, model.lagrangian_gradient,
                              model.c);
  model.system = regularize(std::move(system), config_.regularization);
  if (config_.linear_solver == LinearSolverKind::minres) {
    model.solution = solve_minres(model.system, config_.minres);
    minres_total_ += model.solution.iterations;
  } else {
    model.solution = solve_dense(model.system);
  }
}

double Engine::objective_at(const IterateModel& model, const Vector& x) {
  return finite_sum_ ? oracle_.sample_f(x, model.S_f) : oracle_.f(x);
}

double Engine::phi_at(const IterateModel& model, const Vector& x, double tau) {
  const double f = objective_at(model, x);
  return merit_phi(f, oracle_.c(x), tau);
}

double Engine::phi_current(const IterateModel& model, double tau) const {
  return merit_phi(model.f, model.c, tau);
}

double Engine::curvature_dWd(const IterateModel& model, const Vector& d) const {
  return d.dot(model.system.hessian * d);
}

double Engine::curvature_dHd(const IterateModel& model, const Vector& d) const {
  return d.dot(model.H * d);
}

double Engine::constraint_curvature(const IterateModel& model,
                                    const Vector& d) const {
  double s = 0;
  for (const Matrix& C : model.constraint_hessians) s += std::abs(d.dot(C * d));
  return s;
}

double Engine::eps_A(const IterateModel& model, double tau) {
  if (exact_fg_ || !finite_sum_) return 0.0;
  const ErrorBounds eb =
      error_bounds(finite_sum_->num_components(), model.size_f, model.size_g,
                   model.size_H, *constants_);
  return relaxation_eps_A({eb.eps_f, eb.eps_g, config_.surrogates}, tau);
}

bool Engine::terminated(const IterateModel& model) {
  if (!reference_)
    reference_ = TerminationReference{model.stationarity, model.feasibility};
  const double tol = config_.termination_tol;
  return model.stationarity <= tol * std::max(1.0, reference_->stationarity0) &&
         model.feasibility <= tol * std::max(1.0, reference_->feasibility0);
}

std::optional<std::string> Engine::exhausted_budget() const {
  const OracleCounters& c = oracle_.counters();
  if (c.function >= config_.function_eval_budget) return "function evaluations";
  if (c.hessian >= config_.hessian_eval_budget) return "Hessian evaluations";
  if (minres_total_ >= config_.minres_iteration_budget) return "MINRES iterations";
  return std::nullopt;
}

IterationRecord Engine::begin_record(const IterateModel& model) const {
  IterationRecord rec;
  rec.k = model.k;
  const Vector& d = model.solution.d;
  if (config_.record_iterates) {
    rec.x = model.w.x;
    rec.y = model.w.y;
    rec.d = d;
    rec.delta = model.solution.delta;
  }
  rec.d_norm = d.norm();
  rec.feasibility = model.feasibility;
  rec.stationarity = model.stationarity;
  rec.f = model.f;
  rec.c_l1 = model.c.lpNorm<1>();
  rec.dWd = curvature_dWd(model, d);
  rec.dHd = curvature_dHd(model, d);
  rec.sum_abs_dCid = constraint_curvature(model, d);
  rec.size_f = model.size_f;
  rec.size_g = model.size_g;
  rec.size_H = model.size_H;
  rec.regularization = model.system.regularization;
  rec.minres_iterations = model.solution.iterations;
  return rec;
}

SolveOutcome drive(const std::string& method,
                   std::shared_ptr<const Problem> problem,
                   const StartSpec& start, const SolverConfig& config,
                   const StepRule& step) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveOutcome out;
  out.method = method;
  out.problem = problem->name();
  Engine engine(problem, config);
  Oracle& oracle = engine.oracle();

  PrimalDual w = resolve_start(oracle, start);
  out.final = w;
  try {
    for (int k = 0;; ++k) {
      const OracleCounters before = oracle.counters();
      IterateModel model = engine.evaluate(w, k);
      out.iterations = k;
      out.final = w;
      out.final_objective = model.f;
      out.final_stationarity = model.stationarity;
      out.final_feasibility = model.feasibility;
      if (engine.terminated(model)) {
        out.status = SolveStatus::converged;
        break;
      }
      if (k >= config.max_iterations) {
        out.status = SolveStatus::iteration_limit;
        break;
      }
      if (auto budget = engine.exhausted_budget()) {
        out.status = SolveStatus::evaluation_limit;
        out.message = "budget exhausted: " + *budget;
        break;
      }
      engine.compute_direction(model);
      IterationRecord rec = engine.begin_record(model);
      PrimalDual next = step(engine, model, rec);
      rec.evaluations = oracle.counters() - before;
      out.trace.push_back(std::move(rec));
      w = std::move(next);
    }
  } catch (const LicqFailure& e) {
    out.status = SolveStatus::licq_failure;
    out.message = e.what();
  } catch (const IllPosedSubproblem& e) {
    out.status = SolveStatus::ill_posed;
    out.message = e.what();
  } catch (const LineSearchFailure& e) {
    out.status = SolveStatus::linesearch_failure;
    out.message = e.what();
  } catch (const SolverError& e) {
    out.status = SolveStatus::numerical_failure;
    out.message = e.what();
  }
  out.counters = oracle.counters();
  out.minres_iterations = engine.minres_iterations();
  out.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace msqp::detail
