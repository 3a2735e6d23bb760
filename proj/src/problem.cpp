#include "msqp/problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include <Eigen/Eigenvalues>

#include "msqp/errors.hpp"

namespace msqp {

double FiniteSumProblem::component_hessian_norm(const Vector& x, int i) const {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(component_hessian(x, i),
                                            Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

double FiniteSumProblem::sample_objective(const Vector& x,
                                          std::span<const int> idx) const {
  if (idx.empty()) throw std::invalid_argument("empty sample set");
  double sum = 0;
  for (int i : idx) sum += component_objective(x, i);
  return sum / static_cast<double>(idx.size());
}

Vector FiniteSumProblem::sample_gradient(const Vector& x,
                                         std::span<const int> idx) const {
  if (idx.empty()) throw std::invalid_argument("empty sample set");
  Vector sum = Vector::Zero(num_variables());
  for (int i : idx) sum += component_gradient(x, i);
  return sum / static_cast<double>(idx.size());
}

Matrix FiniteSumProblem::sample_hessian(const Vector& x,
                                        std::span<const int> idx) const {
  if (idx.empty()) throw std::invalid_argument("empty sample set");
  Matrix sum = Matrix::Zero(num_variables(), num_variables());
  for (int i : idx) sum += component_hessian(x, i);
  return sum / static_cast<double>(idx.size());
}

Vector PrimalDual::stacked() const {
  Vector w(x.size() + y.size());
  w << x, y;
  return w;
}

OracleCounters OracleCounters::operator-(const OracleCounters& o) const {
  return {function - o.function,     gradient - o.gradient,
          hessian - o.hessian,       constraint - o.constraint,
          jacobian - o.jacobian,     constraint_hessian - o.constraint_hessian};
}

Oracle::Oracle(std::shared_ptr<const Problem> problem)
    : problem_{std::move(problem)},
      finite_sum_{dynamic_cast<const FiniteSumProblem*>(problem_.get())} {
  if (!problem_) throw std::invalid_argument("null problem");
}

double Oracle::f(const Vector& x) {
  counters_.function += 1;
  return problem_->objective(x);
}

Vector Oracle::g(const Vector& x) {
  counters_.gradient += 1;
  return problem_->gradient(x);
}

Matrix Oracle::H(const Vector& x) {
  counters_.hessian += 1;
  return problem_->hessian(x);
}

Vector Oracle::Hv(const Vector& x, const Vector& v) {
  counters_.hessian += 1;
  return problem_->hessian_product(x, v);
}

Vector Oracle::c(const Vector& x) {
  counters_.constraint += 1;
  return problem_->constraints(x);
}

Matrix Oracle::J(const Vector& x) {
  counters_.jacobian += 1;
  return problem_->jacobian(x);
}

std::vector<Matrix> Oracle::constraint_hessians(const Vector& x) {
  counters_.constraint_hessian += 1;
  std::vector<Matrix> out;
  out.reserve(m());
  for (int i = 0; i < m(); ++i) out.push_back(problem_->constraint_hessian(x, i));
  return out;
}

const FiniteSumProblem& Oracle::require_finite_sum() const {
  if (!finite_sum_)
    throw std::invalid_argument("problem '" + problem_->name() +
                                "' is not a finite sum");
  return *finite_sum_;
}

double Oracle::weight(std::span<const int> idx) const {
  return static_cast<double>(idx.size()) /
         static_cast<double>(finite_sum_->num_components());
}

bool Oracle::is_full(std::span<const int> idx) const {
  return static_cast<int>(idx.size()) == finite_sum_->num_components();
}

double Oracle::sample_f(const Vector& x, std::span<const int> idx) {
  const auto& fs = require_finite_sum();
  counters_.function += weight(idx);
  // A full sample is the full function; evaluate it the same way a
  // deterministic caller would so both paths agree bit for bit.
  if (is_full(idx)) return problem_->objective(x);
  return fs.sample_objective(x, idx);
}

Vector Oracle::sample_g(const Vector& x, std::span<const int> idx) {
  const auto& fs = require_finite_sum();
  counters_.gradient += weight(idx);
  if (is_full(idx)) return problem_->gradient(x);
  return fs.sample_gradient(x, idx);
}

Matrix Oracle::sample_H(const Vector& x, std::span<const int> idx) {
  const auto& fs = require_finite_sum();
  counters_.hessian += weight(idx);
  if (is_full(idx)) return problem_->hessian(x);
  return fs.sample_hessian(x, idx);
}

void check_dimensions(const Problem& problem, const PrimalDual& w) {
  if (w.x.size() != problem.num_variables() ||
      w.y.size() != problem.num_constraints()) {
    throw DimensionError("iterate has dimensions (" +
                         std::to_string(w.x.size()) + ", " +
                         std::to_string(w.y.size()) + "), problem expects (" +
                         std::to_string(problem.num_variables()) + ", " +
                         std::to_string(problem.num_constraints()) + ")");
  }
}

Vector lagrangian_gradient(Oracle& oracle, const PrimalDual& w) {
  check_dimensions(oracle.problem(), w);
  return oracle.g(w.x) + oracle.J(w.x).transpose() * w.y;
}

Matrix lagrangian_hessian(const Matrix& objective_hessian,
                          std::span<const Matrix> constraint_hessians,
                          const Vector& y) {
  if (static_cast<Eigen::Index>(constraint_hessians.size()) != y.size())
    throw DimensionError("multiplier count does not match constraint count");
  Matrix W = objective_hessian;
  for (std::size_t i = 0; i < constraint_hessians.size(); ++i) {
    if (y[i] != 0.0) W += y[i] * constraint_hessians[i];
  }
  return 0.5 * (W + W.transpose());
}

Matrix lagrangian_hessian(Oracle& oracle, const PrimalDual& w) {
  check_dimensions(oracle.problem(), w);
  const auto hessians = oracle.constraint_hessians(w.x);
  return lagrangian_hessian(oracle.H(w.x), hessians, w.y);
}

Vector lagrangian_hessian_product(Oracle& oracle, const PrimalDual& w,
                                  const Vector& v) {
  check_dimensions(oracle.problem(), w);
  if (v.size() != oracle.n()) throw DimensionError("product vector size");
  Vector out = oracle.Hv(w.x, v);
  const auto hessians = oracle.constraint_hessians(w.x);
  for (int i = 0; i < oracle.m(); ++i) out += w.y[i] * (hessians[i] * v);
  return out;
}

double FiniteDifferenceReport::max_first_order() const {
  return std::max(gradient, jacobian);
}

double FiniteDifferenceReport::max_second_order() const {
  return std::max(hessian, constraint_hessian);
}

namespace {

double relative_error(const Matrix& analytic, const Matrix& approx) {
  if (analytic.size() == 0) return 0.0;
  const double scale = std::max(1.0, analytic.cwiseAbs().maxCoeff());
  return (analytic - approx).cwiseAbs().maxCoeff() / scale;
}

}  // namespace

FiniteDifferenceReport finite_difference_check(const Problem& problem,
                                               const Vector& x, double step) {
  if (!(step > 0)) throw std::invalid_argument("step must be positive");
  const int n = problem.num_variables();
  const int m = problem.num_constraints();
  if (x.size() != n) throw DimensionError("point has wrong dimension");

  Vector g_fd(n);
  Matrix H_fd(n, n);
  Matrix J_fd(m, n);
  std::vector<Matrix> C_fd(m, Matrix(n, n));

  Vector xp = x;
  Vector xm = x;
  for (int j = 0; j < n; ++j) {
    xp[j] = x[j] + step;
    xm[j] = x[j] - step;
    const double denom = xp[j] - xm[j];
    g_fd[j] = (problem.objective(xp) - problem.objective(xm)) / denom;
    H_fd.col(j) = (problem.gradient(xp) - problem.gradient(xm)) / denom;
    J_fd.col(j) = (problem.constraints(xp) - problem.constraints(xm)) / denom;
    const Matrix Jp = problem.jacobian(xp);
    const Matrix Jm = problem.jacobian(xm);
    for (int i = 0; i < m; ++i) {
      C_fd[i].col(j) = (Jp.row(i) - Jm.row(i)).transpose() / denom;
    }
    xp[j] = x[j];
    xm[j] = x[j];
  }

  FiniteDifferenceReport report;
  report.gradient = relative_error(problem.gradient(x), g_fd);
  report.hessian = relative_error(problem.hessian(x), H_fd);
  report.jacobian = relative_error(problem.jacobian(x), J_fd);
  for (int i = 0; i < m; ++i) {
    report.constraint_hessian = std::max(
        report.constraint_hessian,
        relative_error(problem.constraint_hessian(x, i), C_fd[i]));
  }
  return report;
}

namespace {

class DeterministicView final : public Problem {
 public:
  explicit DeterministicView(std::shared_ptr<const Problem> inner)
      : inner_(std::move(inner)) {}

  std::string name() const override { return inner_->name(); }
  int num_variables() const override { return inner_->num_variables(); }
  int num_constraints() const override { return inner_->num_constraints(); }
  double objective(const Vector& x) const override { return inner_->objective(x); }
  Vector gradient(const Vector& x) const override { return inner_->gradient(x); }
  Matrix hessian(const Vector& x) const override { return inner_->hessian(x); }
  Vector constraints(const Vector& x) const override {
    return inner_->constraints(x);
  }
  Matrix jacobian(const Vector& x) const override { return inner_->jacobian(x); }
  Matrix constraint_hessian(const Vector& x, int i) const override {
    return inner_->constraint_hessian(x, i);
  }
  Vector hessian_product(const Vector& x, const Vector& v) const override {
    return inner_->hessian_product(x, v);
  }

 private:
  std::shared_ptr<const Problem> inner_;
};

}  // namespace

std::shared_ptr<const Problem> deterministic_view(
    std::shared_ptr<const Problem> inner) {
  if (!inner) throw std::invalid_argument("deterministic_view of null problem");
  return std::make_shared<DeterministicView>(std::move(inner));
}

}  // namespace msqp
