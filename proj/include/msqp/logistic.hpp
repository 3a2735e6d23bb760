#pragma once

#include <cstdint>
#include <memory>

#include "msqp/libsvm.hpp"
#include "msqp/problem.hpp"

namespace msqp {

/**
 * Constrained binary logistic regression
 *
 *   min (1/N) Σ log(1 + exp(−yᵢ Xᵢx))  s.t.  A₁x = a₁,  xᵀA₂x = a₂.
 *
 * The quadratic constraint is the last constraint row.
 */
struct LogisticProblemSpec {
  Matrix X;
  Vector labels;
  Matrix A1;
  Vector a1;
  Matrix A2;
  double a2 = 5.0;
  std::uint64_t seed = 0;
};

struct ConstraintOptions {
  int linear_constraints = 5;
  /// Standard deviation of the Gaussian entries of A₁ and a₁.
  double stddev = 1.0;
  double a2 = 5.0;
  double eigenvalue_min = 1.0;
  double eigenvalue_max = 10.0;
};

/**
 * Draws A₁, a₁ from a Gaussian and A₂ = QᵀDQ with Q orthogonal (QR of a
 * Gaussian matrix) and D = diag(linspace(min, max, n)).
 */
LogisticProblemSpec make_logistic_spec(LabeledData data,
                                       const ConstraintOptions& options,
                                       std::uint64_t seed);

/// Throws DimensionError / std::invalid_argument if the problem description is malformed or
/// A₁ is rank deficient.
void validate(const LogisticProblemSpec& spec);

class LogisticProblem final : public FiniteSumProblem {
 public:
  explicit LogisticProblem(LogisticProblemSpec spec);

  const LogisticProblemSpec& spec() const { return spec_; }

  std::string name() const override { return "logistic"; }
  int num_variables() const override { return static_cast<int>(spec_.X.cols()); }
  int num_constraints() const override {
    return static_cast<int>(spec_.A1.rows()) + 1;
  }
  int num_components() const override { return static_cast<int>(spec_.X.rows()); }

  double objective(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  Matrix hessian(const Vector& x) const override;
  Vector hessian_product(const Vector& x, const Vector& v) const override;

  Vector constraints(const Vector& x) const override;
  Matrix jacobian(const Vector& x) const override;
  Matrix constraint_hessian(const Vector& x, int i) const override;

  double component_objective(const Vector& x, int i) const override;
  Vector component_gradient(const Vector& x, int i) const override;
  Matrix component_hessian(const Vector& x, int i) const override;
  double component_hessian_norm(const Vector& x, int i) const override;

 private:
  LogisticProblemSpec spec_;
};

std::shared_ptr<const LogisticProblem> make_logistic_problem(
    LogisticProblemSpec spec);

/// Gaussian features with labels from a noisy linear model; for tests and
/// the synthetic problem key.
LabeledData synthetic_classification(int samples, int features,
                                     std::uint64_t seed);

}  // namespace msqp
