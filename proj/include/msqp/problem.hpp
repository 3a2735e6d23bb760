#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace msqp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/**
 * Smooth equality-constrained problem  min f(x)  s.t.  c(x) = 0.
 *
 * Implementations are immutable; evaluation must not have side effects.
 * Call counting lives in Oracle so several runs can share one Problem.
 */
class Problem {
 public:
  virtual ~Problem() = default;

  virtual std::string name() const = 0;
  virtual int num_variables() const = 0;
  virtual int num_constraints() const = 0;

  virtual double objective(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;
  virtual Matrix hessian(const Vector& x) const = 0;

  virtual Vector constraints(const Vector& x) const = 0;
  /// m×n matrix whose rows are ∇c_i(x)ᵀ.
  virtual Matrix jacobian(const Vector& x) const = 0;
  /// ∇²c_i(x) for 0 ≤ i < m.
  virtual Matrix constraint_hessian(const Vector& x, int i) const = 0;

  /// H(x)·v. Override when a cheaper product exists.
  virtual Vector hessian_product(const Vector& x, const Vector& v) const {
    return hessian(x) * v;
  }
};

/**
 * Finite-sum objective f(x) = (1/N) Σ f_i(x) with deterministic constraints.
 *
 * The sample_* members return arithmetic means over an index set; the full
 * index set reproduces objective/gradient/hessian up to summation order.
 */
class FiniteSumProblem : public Problem {
 public:
  virtual int num_components() const = 0;

  virtual double component_objective(const Vector& x, int i) const = 0;
  virtual Vector component_gradient(const Vector& x, int i) const = 0;
  virtual Matrix component_hessian(const Vector& x, int i) const = 0;
  /// ‖∇²f_i(x)‖₂; the default goes through an eigen-decomposition.
  virtual double component_hessian_norm(const Vector& x, int i) const;

  virtual double sample_objective(const Vector& x,
                                  std::span<const int> idx) const;
  virtual Vector sample_gradient(const Vector& x,
                                 std::span<const int> idx) const;
  virtual Matrix sample_hessian(const Vector& x,
                                std::span<const int> idx) const;
};

/// Primal-dual iterate w = (x, y).
struct PrimalDual {
  Vector x;
  Vector y;

  Vector stacked() const;
};

/**
 * Evaluation counts. Finite-sum evaluations are weighted by |S|/N so that
 * one full pass over the data counts as one evaluation.
 */
struct OracleCounters {
  double function = 0;
  double gradient = 0;
  double hessian = 0;
  double constraint = 0;
  double jacobian = 0;
  double constraint_hessian = 0;

  void reset() { *this = OracleCounters{}; }
  OracleCounters operator-(const OracleCounters& other) const;
};

/**
 * Counting front end over a Problem. One Oracle belongs to one solver run;
 * every evaluator increments exactly one counter.
 */
class Oracle {
 public:
  explicit Oracle(std::shared_ptr<const Problem> problem);

  const Problem& problem() const { return *problem_; }
  std::shared_ptr<const Problem> shared_problem() const { return problem_; }
  /// Null when the problem is not a finite sum.
  const FiniteSumProblem* finite_sum() const { return finite_sum_; }

  int n() const { return problem_->num_variables(); }
  int m() const { return problem_->num_constraints(); }

  double f(const Vector& x);
  Vector g(const Vector& x);
  Matrix H(const Vector& x);
  Vector Hv(const Vector& x, const Vector& v);
  Vector c(const Vector& x);
  Matrix J(const Vector& x);
  /// All m constraint Hessians; one call counts as one evaluation.
  std::vector<Matrix> constraint_hessians(const Vector& x);

  double sample_f(const Vector& x, std::span<const int> idx);
  Vector sample_g(const Vector& x, std::span<const int> idx);
  Matrix sample_H(const Vector& x, std::span<const int> idx);

  const OracleCounters& counters() const { return counters_; }
  void reset_counters() { counters_.reset(); }

 private:
  const FiniteSumProblem& require_finite_sum() const;
  double weight(std::span<const int> idx) const;
  bool is_full(std::span<const int> idx) const;

  std::shared_ptr<const Problem> problem_;
  const FiniteSumProblem* finite_sum_ = nullptr;
  OracleCounters counters_;
};

/// g(x) + J(x)ᵀy.
Vector lagrangian_gradient(Oracle& oracle, const PrimalDual& w);

/// H(x) + Σ y_i ∇²c_i(x), symmetrized.
Matrix lagrangian_hessian(Oracle& oracle, const PrimalDual& w);

/// Same as above with a caller-provided objective Hessian (e.g. subsampled).
Matrix lagrangian_hessian(const Matrix& objective_hessian,
                          std::span<const Matrix> constraint_hessians,
                          const Vector& y);

/// Matrix-free W·v.
Vector lagrangian_hessian_product(Oracle& oracle, const PrimalDual& w,
                                  const Vector& v);

/// Max relative errors between analytic derivatives and central differences.
struct FiniteDifferenceReport {
  double gradient = 0;
  double hessian = 0;
  double jacobian = 0;
  double constraint_hessian = 0;

  double max_first_order() const;
  double max_second_order() const;
};

/**
 * Central-difference audit at x. Errors are ‖analytic − fd‖_∞ / max(1,
 * ‖analytic‖_∞) per surface; constraint Hessians report the worst i.
 */
FiniteDifferenceReport finite_difference_check(const Problem& problem,
                                               const Vector& x, double step);

/// Throws DimensionError unless x has n entries and y has m entries.
void check_dimensions(const Problem& problem, const PrimalDual& w);

/**
 * Forwards every evaluation to `inner` but hides any finite-sum structure,
 * so solvers take the exact full-batch path.
 */
std::shared_ptr<const Problem> deterministic_view(
    std::shared_ptr<const Problem> inner);

}  // namespace msqp
