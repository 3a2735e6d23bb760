#include "msqp/logistic.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "msqp/errors.hpp"

namespace msqp {

namespace {

// log(1 + e^s) without overflow.
double softplus(double s) {
  return s > 0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s));
}

double sigmoid(double s) {
  if (s >= 0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

Matrix gaussian_matrix(std::mt19937_64& rng, Eigen::Index rows,
                       Eigen::Index cols, double stddev) {
  std::normal_distribution<double> normal(0.0, stddev);
  Matrix out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = normal(rng);
  return out;
}

}  // namespace

LogisticProblemSpec make_logistic_spec(LabeledData data,
                                       const ConstraintOptions& options,
                                       std::uint64_t seed) {
  const Eigen::Index n = data.X.cols();
  const Eigen::Index m = options.linear_constraints;
  if (m < 0 || m >= n)
    throw std::invalid_argument("need 0 <= linear constraints < features");

  std::mt19937_64 rng(seed);
  LogisticProblemSpec spec;
  spec.X = std::move(data.X);
  spec.labels = std::move(data.labels);
  spec.A1 = gaussian_matrix(rng, m, n, options.stddev);
  spec.a1 = gaussian_matrix(rng, m, 1, options.stddev);

  const Matrix Q = Eigen::HouseholderQR<Matrix>(gaussian_matrix(rng, n, n, 1.0))
                       .householderQ();
  const Vector D = Vector::LinSpaced(n, options.eigenvalue_min,
                                     options.eigenvalue_max);
  const Matrix A2 = Q.transpose() * D.asDiagonal() * Q;
  spec.A2 = 0.5 * (A2 + A2.transpose());
  spec.a2 = options.a2;
  spec.seed = seed;
  validate(spec);
  return spec;
}

void validate(const LogisticProblemSpec& spec) {
  const Eigen::Index n = spec.X.cols();
  if (spec.X.rows() == 0 || n == 0) throw DimensionError("empty data matrix");
  if (spec.labels.size() != spec.X.rows())
    throw DimensionError("label count does not match data rows");
  if (spec.A1.cols() != n || spec.a1.size() != spec.A1.rows())
    throw DimensionError("linear constraint block has wrong shape");
  if (spec.A2.rows() != n || spec.A2.cols() != n)
    throw DimensionError("quadratic constraint matrix has wrong shape");
  for (Eigen::Index i = 0; i < spec.labels.size(); ++i) {
    if (spec.labels[i] != 1.0 && spec.labels[i] != -1.0)
      throw std::invalid_argument("labels must be +1 or -1");
  }
  if (spec.A1.rows() > 0) {
    Eigen::ColPivHouseholderQR<Matrix> qr(spec.A1);
    if (qr.rank() != spec.A1.rows())
      throw std::invalid_argument("A1 is rank deficient");
  }
  if ((spec.A2 - spec.A2.transpose()).cwiseAbs().maxCoeff() >
      1e-12 * std::max(1.0, spec.A2.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("A2 is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(spec.A2, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() <= 0)
    throw std::invalid_argument("A2 is not positive definite");
}

LogisticProblem::LogisticProblem(LogisticProblemSpec spec)
    : spec_{std::move(spec)} {
  validate(spec_);
}

double LogisticProblem::objective(const Vector& x) const {
  const Vector t = spec_.labels.cwiseProduct(spec_.X * x);
  return t.unaryExpr([](double s) { return softplus(-s); }).mean();
}

Vector LogisticProblem::gradient(const Vector& x) const {
  const Vector t = spec_.labels.cwiseProduct(spec_.X * x);
  const Vector w = -spec_.labels.cwiseProduct(
      t.unaryExpr([](double s) { return sigmoid(-s); }));
  return spec_.X.transpose() * w / static_cast<double>(spec_.X.rows());
}

Matrix LogisticProblem::hessian(const Vector& x) const {
  const Vector t = spec_.labels.cwiseProduct(spec_.X * x);
  const Vector s =
      t.unaryExpr([](double v) { return sigmoid(v) * sigmoid(-v); });
  Matrix H = spec_.X.transpose() * s.asDiagonal() * spec_.X;
  H /= static_cast<double>(spec_.X.rows());
  return 0.5 * (H + H.transpose());
}

Vector LogisticProblem::hessian_product(const Vector& x, const Vector& v) const {
  const Vector t = spec_.labels.cwiseProduct(spec_.X * x);
  const Vector s =
      t.unaryExpr([](double u) { return sigmoid(u) * sigmoid(-u); });
  return spec_.X.transpose() * s.cwiseProduct(spec_.X * v) /
         static_cast<double>(spec_.X.rows());
}

Vector LogisticProblem::constraints(const Vector& x) const {
  const Eigen::Index m = spec_.A1.rows();
  Vector c(m + 1);
  c.head(m) = spec_.A1 * x - spec_.a1;
  c[m] = x.dot(spec_.A2 * x) - spec_.a2;
  return c;
}

Matrix LogisticProblem::jacobian(const Vector& x) const {
  const Eigen::Index m = spec_.A1.rows();
  Matrix J(m + 1, x.size());
  J.topRows(m) = spec_.A1;
  J.row(m) = 2.0 * (spec_.A2 * x).transpose();
  return J;
}

Matrix LogisticProblem::constraint_hessian(const Vector& x, int i) const {
  if (i < 0 || i >= num_constraints())
    throw std::out_of_range("constraint index");
  if (i < spec_.A1.rows()) return Matrix::Zero(x.size(), x.size());
  return 2.0 * spec_.A2;
}

double LogisticProblem::component_objective(const Vector& x, int i) const {
  return softplus(-spec_.labels[i] * spec_.X.row(i).dot(x));
}

Vector LogisticProblem::component_gradient(const Vector& x, int i) const {
  const double b = spec_.labels[i];
  const double t = b * spec_.X.row(i).dot(x);
  return (-b * sigmoid(-t)) * spec_.X.row(i).transpose();
}

Matrix LogisticProblem::component_hessian(const Vector& x, int i) const {
  const double t = spec_.labels[i] * spec_.X.row(i).dot(x);
  return (sigmoid(t) * sigmoid(-t)) *
         (spec_.X.row(i).transpose() * spec_.X.row(i));
}

double LogisticProblem::component_hessian_norm(const Vector& x, int i) const {
  const double t = spec_.labels[i] * spec_.X.row(i).dot(x);
  return sigmoid(t) * sigmoid(-t) * spec_.X.row(i).squaredNorm();
}

std::shared_ptr<const LogisticProblem> make_logistic_problem(
    LogisticProblemSpec spec) {
  return std::make_shared<const LogisticProblem>(std::move(spec));
}

LabeledData synthetic_classification(int samples, int features,
                                     std::uint64_t seed) {
  if (samples < 1 || features < 1)
    throw std::invalid_argument("synthetic data needs positive sizes");
  std::mt19937_64 rng(seed);
  LabeledData data;
  data.X = gaussian_matrix(rng, samples, features, 1.0);
  const Vector w = gaussian_matrix(rng, features, 1, 1.0) /
                   std::sqrt(static_cast<double>(features));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  data.labels.resize(samples);
  for (int i = 0; i < samples; ++i) {
    const double p = sigmoid(2.0 * data.X.row(i).dot(w));
    data.labels[i] = unif(rng) < p ? 1.0 : -1.0;
  }
  return data;
}

}  // namespace msqp
