#include "msqp/minres.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "msqp/errors.hpp"

namespace msqp {

void MinresConfig::validate() const {
  if (!(kappa > 0 && kappa <= 1))
    throw ConfigError("MINRES kappa must lie in (0, 1]");
  if (max_iterations < 0) throw ConfigError("MINRES max_iterations < 0");
  if (!(absolute_floor >= 0)) throw ConfigError("MINRES floor must be >= 0");
}

namespace {

void check_symmetry(const LinearOperator& apply, Eigen::Index size,
                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int probe = 0; probe < 3; ++probe) {
    Vector u(size), v(size);
    for (Eigen::Index i = 0; i < size; ++i) {
      u[i] = normal(rng);
      v[i] = normal(rng);
    }
    const double gap = std::abs(u.dot(apply(v)) - v.dot(apply(u)));
    if (gap > 1e-8 * u.norm() * v.norm())
      throw ContractViolation("MINRES operator is not symmetric");
  }
}

}  // namespace

MinresResult minres_solve(const LinearOperator& apply, const Vector& b,
                          const MinresConfig& config) {
  config.validate();
  if (!b.allFinite()) throw std::invalid_argument("MINRES rhs is not finite");
  const Eigen::Index size = b.size();
  if (config.validate_symmetry) check_symmetry(apply, size, config.validation_seed);

  MinresResult out;
  out.solution = Vector::Zero(size);
  const double target =
      std::max(config.kappa * b.lpNorm<Eigen::Infinity>(), config.absolute_floor);
  if (size == 0 || b.lpNorm<Eigen::Infinity>() <= target) {
    out.report.converged = true;
    return out;
  }
  const int max_it =
      config.max_iterations > 0 ? config.max_iterations : static_cast<int>(size);

  // Lanczos vectors and the three most recent search directions.
  Vector r1 = b, r2 = b, y = b;
  const double beta1 = b.norm();
  double beta = beta1, oldb = 0;
  double dbar = 0, epsln = 0, phibar = beta1;
  double cs = -1, sn = 0;
  Vector w = Vector::Zero(size), w1(size), w2 = Vector::Zero(size);
  Vector& x = out.solution;
  constexpr double tiny = std::numeric_limits<double>::epsilon();

  for (int it = 1; it <= max_it; ++it) {
    const Vector v = y / beta;
    y = apply(v);
    if (it >= 2) y -= (beta / oldb) * r1;
    const double alpha = v.dot(y);
    y -= (alpha / beta) * r2;
    r1 = r2;
    r2 = y;
    oldb = beta;
    beta = r2.norm();

    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alpha;
    const double gbar = sn * dbar - cs * alpha;
    epsln = sn * beta;
    dbar = -cs * beta;
    const double gamma = std::max(std::hypot(gbar, beta), tiny);
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    w1 = w2;
    w2 = w;
    w = (v - oldeps * w1 - delta * w2) / gamma;
    x += phi * w;

    const Vector residual = b - apply(x);
    const double res_inf = residual.lpNorm<Eigen::Infinity>();
    out.report.iterations = it;
    out.report.residual_history.push_back(res_inf);
    out.report.residual_history_2norm.push_back(residual.norm());
    if (!x.allFinite()) throw NumericalBreakdown("MINRES iterate is not finite");
    if (res_inf <= target) {
      out.report.converged = true;
      return out;
    }
    if (beta <= tiny * beta1)
      throw NumericalBreakdown("Lanczos process broke down before convergence");
  }
  return out;
}

LinearOperator kkt_operator(const KktSystem& system) {
  return [&system](const Vector& v) { return system.apply(v); };
}

KktSolution solve_minres(const KktSystem& system, const MinresConfig& config,
                         MinresReport* report) {
  const int n = system.n();
  const int m = system.m();
  MinresResult res = minres_solve(kkt_operator(system), system.rhs(), config);
  KktSolution out;
  out.d = res.solution.head(n);
  out.delta = res.solution.tail(m);
  out.kind = LinearSolverKind::minres;
  out.iterations = res.report.iterations;
  const Vector residual = system.apply(res.solution) - system.rhs();
  out.residual_top = residual.head(n);
  out.residual_bottom = residual.tail(m);
  if (report) *report = std::move(res.report);
  return out;
}

double measure_contraction(const MinresReport& report) {
  const auto& h = report.residual_history_2norm;
  if (h.size() < 2)
    throw InsufficientData("contraction needs at least two residuals");
  if (h.front() == 0) return 0.0;
  return std::pow(h.back() / h.front(), 1.0 / static_cast<double>(h.size() - 1));
}

}  // namespace msqp
