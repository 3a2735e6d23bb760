#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "msqp/problem.hpp"

namespace msqp {

/// Initial iterate: x0 plus either explicit multipliers or the least-squares
/// rule y0 = argmin ‖g(x0) + J(x0)ᵀy‖₂.
struct StartSpec {
  enum class MultiplierRule { explicit_value, least_squares };

  Vector x0;
  MultiplierRule rule = MultiplierRule::least_squares;
  Vector y0;
};

/// A problem together with its start point and, when known, a KKT point.
struct TestProblem {
  std::string key;
  std::shared_ptr<const Problem> problem;
  StartSpec start;
  std::optional<PrimalDual> reference;
  std::optional<double> reference_objective;
};

/// argmin_y ‖g + Jᵀy‖₂ via a rank-revealing orthogonal factorization of Jᵀ.
Vector least_squares_multipliers(const Vector& g, const Matrix& J);

/// Materializes the start (evaluates g, J once when the least-squares rule
/// is selected).
PrimalDual resolve_start(Oracle& oracle, const StartSpec& start);

/// Normal random x0 scaled to ‖x0‖₂ = 0.1, multipliers by least squares.
StartSpec default_start(const Problem& problem, std::uint64_t seed);

/**
 * Problem defined by callbacks. Used for the analytic bank and in tests;
 * every callback must be set.
 */
class FunctionalProblem final : public Problem {
 public:
  struct Callbacks {
    std::function<double(const Vector&)> f;
    std::function<Vector(const Vector&)> g;
    std::function<Matrix(const Vector&)> H;
    std::function<Vector(const Vector&)> c;
    std::function<Matrix(const Vector&)> J;
    std::function<Matrix(const Vector&, int)> C;
  };

  FunctionalProblem(std::string name, int n, int m, Callbacks callbacks);

  std::string name() const override { return name_; }
  int num_variables() const override { return n_; }
  int num_constraints() const override { return m_; }
  double objective(const Vector& x) const override { return cb_.f(x); }
  Vector gradient(const Vector& x) const override { return cb_.g(x); }
  Matrix hessian(const Vector& x) const override { return cb_.H(x); }
  Vector constraints(const Vector& x) const override { return cb_.c(x); }
  Matrix jacobian(const Vector& x) const override { return cb_.J(x); }
  Matrix constraint_hessian(const Vector& x, int i) const override {
    return cb_.C(x, i);
  }

 private:
  std::string name_;
  int n_;
  int m_;
  Callbacks cb_;
};

/// min z₁²+z₂² s.t. (z₁+1)²+z₂²−4 = 0 from (√2−1, √2).
TestProblem maratos_counterexample();

/// Rosenbrock objective on the circle (z₁+2)²+(z₂−1)² = 9 from (−1.1, 1).
TestProblem constrained_rosenbrock();

/// f(x) = aᵀx, c(x) = Bx − b. No reference point (unbounded in general).
TestProblem linear_problem(const Vector& a, const Matrix& B, const Vector& b);

/**
 * Small analytic problems with reference KKT points. Includes the two
 * problems above plus Hock-Schittkowski shapes and a circle orthogonal
 * regression. Reference points are polished by Newton's method on the KKT
 * conditions at construction.
 */
std::vector<TestProblem> analytic_bank();

/// Keys accepted by make_test_problem for the analytic bank.
std::vector<std::string> analytic_bank_keys();

/**
 * Resolves a problem key: any analytic-bank key, `logistic:<path>` for a
 * LIBSVM file, or `logistic-synthetic:<N>x<n>`. The seed drives constraint
 * generation and the start point of logistic problems.
 */
TestProblem make_test_problem(const std::string& key, std::uint64_t seed);

/**
 * Newton's method on (g + Jᵀy, c) = 0 from (x, least-squares y). Returns the
 * polished KKT point; throws SolverError if it does not converge.
 */
PrimalDual refine_kkt_point(const Problem& problem, const Vector& x_approx,
                            int max_iterations = 50);

}  // namespace msqp
