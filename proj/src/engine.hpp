#pragma once

// Machinery shared by every SQP variant: sampled evaluation at an iterate,
// the regularized KKT solve, merit evaluation at trial points, termination
// and the outer loop that turns a per-method step rule into a SolveOutcome.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "msqp/solver.hpp"

namespace msqp::detail {

struct IterateModel {
  int k = 0;
  PrimalDual w;
  /// Index sets; empty when the problem is not a finite sum.
  std::vector<int> S_f, S_g, S_H;
  int size_f = 0, size_g = 0, size_H = 0;

  double f = 0;
  Vector g;
  Vector c;
  Matrix J;
  Vector lagrangian_gradient;
  double stationarity = 0;
  double feasibility = 0;

  // Filled by Engine::compute_direction.
  Matrix H;
  std::vector<Matrix> constraint_hessians;
  KktSystem system;
  KktSolution solution;
};

class Engine {
 public:
  Engine(std::shared_ptr<const Problem> problem, const SolverConfig& config);

  Oracle& oracle() { return oracle_; }
  const SolverConfig& config() const { return config_; }

  IterateModel evaluate(const PrimalDual& w, int k);
  void compute_direction(IterateModel& model);

  /// f at x with the model's function sample (exact f otherwise).
  double objective_at(const IterateModel& model, const Vector& x);
  double phi_at(const IterateModel& model, const Vector& x, double tau);
  double phi_current(const IterateModel& model, double tau) const;

  double curvature_dWd(const IterateModel& model, const Vector& d) const;
  double curvature_dHd(const IterateModel& model, const Vector& d) const;
  double constraint_curvature(const IterateModel& model, const Vector& d) const;
  double eps_A(const IterateModel& model, double tau);

  /// Captures the reference scales on the first call.
  bool terminated(const IterateModel& model);
  /// Name of the exhausted budget, if any.
  std::optional<std::string> exhausted_budget() const;
  int minres_iterations() const { return minres_total_; }

  /// Record prefilled with everything known before the line search.
  IterationRecord begin_record(const IterateModel& model) const;

 private:
  Oracle oracle_;
  SolverConfig config_;
  const FiniteSumProblem* finite_sum_ = nullptr;
  std::optional<SampleSchedule> sched_f_, sched_g_, sched_H_;
  bool exact_fg_ = true;
  std::optional<BoundConstants> constants_;
  std::optional<TerminationReference> reference_;
  int minres_total_ = 0;
};

/// Advances one iteration: fills the record's step fields and returns w_{k+1}.
using StepRule =
    std::function<PrimalDual(Engine&, IterateModel&, IterationRecord&)>;

SolveOutcome drive(const std::string& method,
                   std::shared_ptr<const Problem> problem,
                   const StartSpec& start, const SolverConfig& config,
                   const StepRule& step);

}  // namespace msqp::detail
