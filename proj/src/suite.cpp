#include "msqp/suite.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string_view>

#include <Eigen/LU>
#include <Eigen/QR>

#include "msqp/errors.hpp"
#include "msqp/logistic.hpp"

namespace msqp {

Vector least_squares_multipliers(const Vector& g, const Matrix& J) {
  if (J.rows() == 0) return Vector(0);
  if (J.cols() != g.size()) throw DimensionError("g and J disagree on n");
  return J.transpose().colPivHouseholderQr().solve(-g);
}

PrimalDual resolve_start(Oracle& oracle, const StartSpec& start) {
  if (start.x0.size() != oracle.n())
    throw DimensionError("start point has the wrong dimension");
  PrimalDual w{start.x0, Vector()};
  if (start.rule == StartSpec::MultiplierRule::explicit_value) {
    if (start.y0.size() != oracle.m())
      throw DimensionError("start multipliers have the wrong dimension");
    w.y = start.y0;
  } else {
    w.y = least_squares_multipliers(oracle.g(w.x), oracle.J(w.x));
  }
  return w;
}

StartSpec default_start(const Problem& problem, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector x(problem.num_variables());
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = normal(rng);
  const double norm = x.norm();
  if (norm > 0) x *= 0.1 / norm;
  return StartSpec{x, StartSpec::MultiplierRule::least_squares, Vector()};
}

FunctionalProblem::FunctionalProblem(std::string name, int n, int m,
                                     Callbacks callbacks)
    : name_{std::move(name)}, n_{n}, m_{m}, cb_{std::move(callbacks)} {
  if (n < 1 || m < 0 || m > n)
    throw DimensionError("need n >= 1 and 0 <= m <= n");
  if (!cb_.f || !cb_.g || !cb_.H || !cb_.c || !cb_.J || !cb_.C)
    throw std::invalid_argument("every callback must be set");
}

PrimalDual refine_kkt_point(const Problem& problem, const Vector& x_approx,
                            int max_iterations) {
  const int n = problem.num_variables();
  const int m = problem.num_constraints();
  PrimalDual w{x_approx, least_squares_multipliers(problem.gradient(x_approx),
                                                   problem.jacobian(x_approx))};
  auto residual = [&](const PrimalDual& p) {
    Vector r(n + m);
    r.head(n) = problem.gradient(p.x) + problem.jacobian(p.x).transpose() * p.y;
    r.tail(m) = problem.constraints(p.x);
    return r;
  };

  Vector r = residual(w);
  for (int it = 0; it < max_iterations; ++it) {
    if (r.lpNorm<Eigen::Infinity>() <= 1e-15) break;
    Matrix K = Matrix::Zero(n + m, n + m);
    Matrix W = problem.hessian(w.x);
    for (int i = 0; i < m; ++i) W += w.y[i] * problem.constraint_hessian(w.x, i);
    const Matrix J = problem.jacobian(w.x);
    K.topLeftCorner(n, n) = W;
    K.topRightCorner(n, m) = J.transpose();
    K.bottomLeftCorner(m, n) = J;
    const Vector step = K.fullPivLu().solve(-r);
    PrimalDual next{w.x + step.head(n), w.y + step.tail(m)};
    Vector r_next = residual(next);
    // Newton stalls at round-off; stop once the residual no longer shrinks.
    if (r_next.lpNorm<Eigen::Infinity>() >= r.lpNorm<Eigen::Infinity>()) break;
    w = std::move(next);
    r = std::move(r_next);
  }
  if (!(r.lpNorm<Eigen::Infinity>() <= 1e-10))
    throw SolverError("reference refinement did not reach a KKT point for " +
                      problem.name());
  return w;
}

namespace {

Matrix symmetric2(double a, double b, double c) {
  Matrix M(2, 2);
  M << a, b, b, c;
  return M;
}

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

void set_sym(Matrix& M, int i, int j, double value) {
  M(i, j) = value;
  M(j, i) = value;
}

TestProblem finish(std::string key, std::shared_ptr<const Problem> problem,
                   Vector x0, std::optional<Vector> x_ref_guess) {
  TestProblem tp;
  tp.key = std::move(key);
  tp.problem = std::move(problem);
  tp.start.x0 = std::move(x0);
  tp.start.rule = StartSpec::MultiplierRule::least_squares;
  if (x_ref_guess) {
    tp.reference = refine_kkt_point(*tp.problem, *x_ref_guess);
    tp.reference_objective = tp.problem->objective(tp.reference->x);
  }
  return tp;
}

TestProblem hs006() {
  FunctionalProblem::Callbacks cb;
  cb.f = [](const Vector& x) { return std::pow(1 - x[0], 2); };
  cb.g = [](const Vector& x) { return vec({-2 * (1 - x[0]), 0.0}); };
  cb.H = [](const Vector&) { return symmetric2(2, 0, 0); };
  cb.c = [](const Vector& x) { return vec({10 * (x[1] - x[0] * x[0])}); };
  cb.J = [](const Vector& x) {
    Matrix J(1, 2);
    J << -20 * x[0], 10;
    return J;
  };
  cb.C = [](const Vector&, int) { return symmetric2(-20, 0, 0); };
  return finish("hs006", std::make_shared<FunctionalProblem>("hs006", 2, 1, cb),
                vec({-1.2, 1.0}), vec({1.0, 1.0}));
}

TestProblem hs007() {
  FunctionalProblem::Callbacks cb;
  cb.f = [](const Vector& x) { return std::log1p(x[0] * x[0]) - x[1]; };
  cb.g = [](const Vector& x) {
    return vec({2 * x[0] / (1 + x[0] * x[0]), -1.0});
  };
  cb.H = [](const Vector& x) {
    const double s = 1 + x[0] * x[0];
    return symmetric2(2 * (1 - x[0] * x[0]) / (s * s), 0, 0);
  };
  cb.c = [](const Vector& x) {
    const double s = 1 + x[0] * x[0];
    return vec({s * s + x[1] * x[1] - 4});
  };
  cb.J = [](const Vector& x) {
    Matrix J(1, 2);
    J << 4 * x[0] * (1 + x[0] * x[0]), 2 * x[1];
    return J;
  };
  cb.C = [](const Vector& x, int) {
    return symmetric2(4 + 12 * x[0] * x[0], 0, 2);
  };
  return finish("hs007", std::make_shared<FunctionalProblem>("hs007", 2, 1, cb),
                vec({2.0, 2.0}), vec({0.0, std::sqrt(3.0)}));
}

TestProblem hs027() {
  FunctionalProblem::Callbacks cb;
  cb.f = [](const Vector& x) {
    return 0.01 * std::pow(x[0] - 1, 2) + std::pow(x[1] - x[0] * x[0], 2);
  };
  cb.g = [](const Vector& x) {
    const double r = x[1] - x[0] * x[0];
    return vec({0.02 * (x[0] - 1) - 4 * x[0] * r, 2 * r, 0.0});
  };
  cb.H = [](const Vector& x) {
    Matrix H = Matrix::Zero(3, 3);
    H(0, 0) = 0.02 - 4 * (x[1] - x[0] * x[0]) + 8 * x[0] * x[0];
    set_sym(H, 0, 1, -4 * x[0]);
    H(1, 1) = 2;
    return H;
  };
  cb.c = [](const Vector& x) { return vec({x[0] + x[2] * x[2] + 1}); };
  cb.J = [](const Vector& x) {
    Matrix J(1, 3);
    J << 1, 0, 2 * x[2];
    return J;
  };
  cb.C = [](const Vector&, int) {
    Matrix C = Matrix::Zero(3, 3);
    C(2, 2) = 2;
    return C;
  };
  return finish("hs027", std::make_shared<FunctionalProblem>("hs027", 3, 1, cb),
                vec({2.0, 2.0, 2.0}), vec({-1.0, 1.0, 0.0}));
}

TestProblem hs039() {
  FunctionalProblem::Callbacks cb;
  cb.f = [](const Vector& x) { return -x[0]; };
  cb.g = [](const Vector&) { return vec({-1.0, 0.0, 0.0, 0.0}); };
  cb.H = [](const Vector&) { return Matrix(Matrix::Zero(4, 4)); };
  cb.c = [](const Vector& x) {
    return vec({x[1] - std::pow(x[0], 3) - x[2] * x[2],
                x[0] * x[0] - x[1] - x[3] * x[3]});
  };
  cb.J = [](const Vector& x) {
    Matrix J(2, 4);
    J << -3 * x[0] * x[0], 1, -2 * x[2], 0,
         2 * x[0], -1, 0, -2 * x[3];
    return J;
  };
  cb.C = [](const Vector& x, int i) {
    Matrix C = Matrix::Zero(4, 4);
    if (i == 0) {
      C(0, 0) = -6 * x[0];
      C(2, 2) = -2;
    } else {
      C(0, 0) = 2;
      C(3, 3) = -2;
    }
    return C;
  };
  return finish("hs039", std::make_shared<FunctionalProblem>("hs039", 4, 2, cb),
                vec({2.0, 2.0, 2.0, 2.0}), vec({1.0, 1.0, 0.0, 0.0}));
}

TestProblem hs040() {
  FunctionalProblem::Callbacks cb;
  cb.f = [](const Vector& x) { return -x[0] * x[1] * x[2] * x[3]; };
  cb.g = [](const Vector& x) {
    return vec({-x[1] * x[2] * x[3], -x[0] * x[2] * x[3], -x[0] * x[1] * x[3],
                -x[0] * x[1] * x[2]});
  };
  cb.H = [](const Vector& x) {
    Matrix H = Matrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        double p = -1;
        for (int k = 0; k < 4; ++k)
          if (k != i && k != j) p *= x[k];
        set_sym(H, i, j, p);
      }
    }
    return H;
  };
  cb.c = [](const Vector& x) {
    return vec({std::pow(x[0], 3) + x[1] * x[1] - 1,
                x[0] * x[0] * x[3] - x[2], x[3] * x[3] - x[1]});
  };
  cb.J = [](const Vector& x) {
    Matrix J(3, 4);
    J << 3 * x[0] * x[0], 2 * x[1], 0, 0,
         2 * x[0] * x[3], 0, -1, x[0] * x[0],
         0, -1, 0, 2 * x[3];
    return J;
  };
  cb.C = [](const Vector& x, int i) {
    Matrix C = Matrix::Zero(4, 4);
    if (i == 0) {
      C(0, 0) = 6 * x[0];
      C(1, 1) = 2;
    } else if (i == 1) {
      C(0, 0) = 2 * x[3];
      set_sym(C, 0, 3, 2 * x[0]);
    } else {
      C(3, 3) = 2;
    }
    return C;
  };
  return finish("hs040", std::make_shared<FunctionalProblem>("hs040", 4, 3, cb),
                Vector::Constant(4, 0.8),
                vec({std::pow(2.0, -1.0 / 3), std::pow(2.0, -0.5),
                     std::pow(2.0, -11.0 / 12), std::pow(2.0, -0.25)}));
}

TestProblem hs042() {
  FunctionalProblem::Callbacks cb;
  const Vector target = vec({1, 2, 3, 4});
  cb.f = [target](const Vector& x) { return (x - target).squaredNorm(); };
  cb.g = [target](const Vector& x) { return Vector(2 * (x - target)); };
  cb.H = [](const Vector&) { return Matrix(2 * Matrix::Identity(4, 4)); };
  cb.c = [](const Vector& x) {
    return vec({x[0] - 2, x[2] * x[2] + x[3] * x[3] - 2});
  };
  cb.J = [](const Vector& x) {
    Matrix J(2, 4);
    J << 1, 0, 0, 0,
         0, 0, 2 * x[2], 2 * x[3];
    return J;
  };
  cb.C = [](const Vector&, int i) {
    Matrix C = Matrix::Zero(4, 4);
    if (i == 1) {
      C(2, 2) = 2;
      C(3, 3) = 2;
    }
    return C;
  };
  const double r2 = std::sqrt(2.0);
  return finish("hs042", std::make_shared<FunctionalProblem>("hs042", 4, 2, cb),
                vec({1, 1, 1, 1}), vec({2, 2, 0.6 * r2, 0.8 * r2}));
}

TestProblem hs077() {
  FunctionalProblem::Callbacks cb;
  cb.f = [](const Vector& x) {
    return std::pow(x[0] - 1, 2) + std::pow(x[0] - x[1], 2) +
           std::pow(x[2] - 1, 2) + std::pow(x[3] - 1, 4) +
           std::pow(x[4] - 1, 6);
  };
  cb.g = [](const Vector& x) {
    return vec({2 * (x[0] - 1) + 2 * (x[0] - x[1]), -2 * (x[0] - x[1]),
                2 * (x[2] - 1), 4 * std::pow(x[3] - 1, 3),
                6 * std::pow(x[4] - 1, 5)});
  };
  cb.H = [](const Vector& x) {
    Matrix H = Matrix::Zero(5, 5);
    H(0, 0) = 4;
    set_sym(H, 0, 1, -2);
    H(1, 1) = 2;
    H(2, 2) = 2;
    H(3, 3) = 12 * std::pow(x[3] - 1, 2);
    H(4, 4) = 30 * std::pow(x[4] - 1, 4);
    return H;
  };
  cb.c = [](const Vector& x) {
    return vec({x[0] * x[0] * x[3] + std::sin(x[3] - x[4]) - 2 * std::sqrt(2.0),
                x[1] + std::pow(x[2], 4) * x[3] * x[3] - 8 - std::sqrt(2.0)});
  };
  cb.J = [](const Vector& x) {
    const double cs = std::cos(x[3] - x[4]);
    Matrix J(2, 5);
    J << 2 * x[0] * x[3], 0, 0, x[0] * x[0] + cs, -cs,
         0, 1, 4 * std::pow(x[2], 3) * x[3] * x[3],
         2 * std::pow(x[2], 4) * x[3], 0;
    return J;
  };
  cb.C = [](const Vector& x, int i) {
    Matrix C = Matrix::Zero(5, 5);
    if (i == 0) {
      const double sn = std::sin(x[3] - x[4]);
      C(0, 0) = 2 * x[3];
      set_sym(C, 0, 3, 2 * x[0]);
      C(3, 3) = -sn;
      set_sym(C, 3, 4, sn);
      C(4, 4) = -sn;
    } else {
      C(2, 2) = 12 * x[2] * x[2] * x[3] * x[3];
      set_sym(C, 2, 3, 8 * std::pow(x[2], 3) * x[3]);
      C(3, 3) = 2 * std::pow(x[2], 4);
    }
    return C;
  };
  return finish("hs077", std::make_shared<FunctionalProblem>("hs077", 5, 2, cb),
                Vector::Constant(5, 2.0),
                vec({1.166172, 1.182111, 1.380257, 1.506036, 0.6109203}));
}

TestProblem hs079() {
  FunctionalProblem::Callbacks cb;
  cb.f = [](const Vector& x) {
    return std::pow(x[0] - 1, 2) + std::pow(x[0] - x[1], 2) +
           std::pow(x[1] - x[2], 2) + std::pow(x[2] - x[3], 4) +
           std::pow(x[3] - x[4], 4);
  };
  cb.g = [](const Vector& x) {
    const double p = 4 * std::pow(x[2] - x[3], 3);
    const double q = 4 * std::pow(x[3] - x[4], 3);
    return vec({2 * (x[0] - 1) + 2 * (x[0] - x[1]),
                -2 * (x[0] - x[1]) + 2 * (x[1] - x[2]), -2 * (x[1] - x[2]) + p,
                -p + q, -q});
  };
  cb.H = [](const Vector& x) {
    const double a = 12 * std::pow(x[2] - x[3], 2);
    const double b = 12 * std::pow(x[3] - x[4], 2);
    Matrix H = Matrix::Zero(5, 5);
    H(0, 0) = 4;
    set_sym(H, 0, 1, -2);
    H(1, 1) = 4;
    set_sym(H, 1, 2, -2);
    H(2, 2) = 2 + a;
    set_sym(H, 2, 3, -a);
    H(3, 3) = a + b;
    set_sym(H, 3, 4, -b);
    H(4, 4) = b;
    return H;
  };
  cb.c = [](const Vector& x) {
    const double r2 = std::sqrt(2.0);
    return vec({x[0] + x[1] * x[1] + std::pow(x[2], 3) - 2 - 3 * r2,
                x[1] - x[2] * x[2] + x[3] + 2 - 2 * r2, x[0] * x[4] - 2});
  };
  cb.J = [](const Vector& x) {
    Matrix J(3, 5);
    J << 1, 2 * x[1], 3 * x[2] * x[2], 0, 0,
         0, 1, -2 * x[2], 1, 0,
         x[4], 0, 0, 0, x[0];
    return J;
  };
  cb.C = [](const Vector& x, int i) {
    Matrix C = Matrix::Zero(5, 5);
    if (i == 0) {
      C(1, 1) = 2;
      C(2, 2) = 6 * x[2];
    } else if (i == 1) {
      C(2, 2) = -2;
    } else {
      set_sym(C, 0, 4, 1);
    }
    return C;
  };
  return finish("hs079", std::make_shared<FunctionalProblem>("hs079", 5, 3, cb),
                Vector::Constant(5, 2.0),
                vec({1.191127, 1.362603, 1.472818, 1.635017, 1.679081}));
}

TestProblem hs100lnp() {
  FunctionalProblem::Callbacks cb;
  cb.f = [](const Vector& x) {
    return std::pow(x[0] - 10, 2) + 5 * std::pow(x[1] - 12, 2) +
           std::pow(x[2], 4) + 3 * std::pow(x[3] - 11, 2) +
           10 * std::pow(x[4], 6) + 7 * x[5] * x[5] + std::pow(x[6], 4) -
           4 * x[5] * x[6] - 10 * x[5] - 8 * x[6];
  };
  cb.g = [](const Vector& x) {
    return vec({2 * (x[0] - 10), 10 * (x[1] - 12), 4 * std::pow(x[2], 3),
                6 * (x[3] - 11), 60 * std::pow(x[4], 5),
                14 * x[5] - 4 * x[6] - 10,
                4 * std::pow(x[6], 3) - 4 * x[5] - 8});
  };
  cb.H = [](const Vector& x) {
    Matrix H = Matrix::Zero(7, 7);
    H(0, 0) = 2;
    H(1, 1) = 10;
    H(2, 2) = 12 * x[2] * x[2];
    H(3, 3) = 6;
    H(4, 4) = 300 * std::pow(x[4], 4);
    H(5, 5) = 14;
    set_sym(H, 5, 6, -4);
    H(6, 6) = 12 * x[6] * x[6];
    return H;
  };
  cb.c = [](const Vector& x) {
    return vec({2 * x[0] * x[0] + 3 * std::pow(x[1], 4) + x[2] +
                    4 * x[3] * x[3] + 5 * x[4] - 127,
                -4 * x[0] * x[0] - x[1] * x[1] + 3 * x[0] * x[1] -
                    2 * x[2] * x[2] - 5 * x[5] + 11 * x[6]});
  };
  cb.J = [](const Vector& x) {
    Matrix J(2, 7);
    J << 4 * x[0], 12 * std::pow(x[1], 3), 1, 8 * x[3], 5, 0, 0,
         -8 * x[0] + 3 * x[1], -2 * x[1] + 3 * x[0], -4 * x[2], 0, 0, -5, 11;
    return J;
  };
  cb.C = [](const Vector& x, int i) {
    Matrix C = Matrix::Zero(7, 7);
    if (i == 0) {
      C(0, 0) = 4;
      C(1, 1) = 36 * x[1] * x[1];
      C(3, 3) = 8;
    } else {
      C(0, 0) = -8;
      set_sym(C, 0, 1, 3);
      C(1, 1) = -2;
      C(2, 2) = -4;
    }
    return C;
  };
  return finish("hs100lnp",
                std::make_shared<FunctionalProblem>("hs100lnp", 7, 2, cb),
                vec({1, 2, 0, 4, 0, 1, 1}),
                vec({2.330499, 1.951372, -0.4775414, 4.365726, -0.6244870,
                     1.038131, 1.594227}));
}

// Orthogonal distance fit of a circle to six noisy points. Variables are
// (p, q, R, u_1, v_1, ..., u_P, v_P); each projected point (u_i, v_i) must lie
// on the circle with center (p, q) and radius R.
TestProblem orthreg_circle() {
  static constexpr int P = 6;
  const double radial_noise[P] = {0.15, -0.1, 0.05, -0.2, 0.12, -0.07};
  Vector a(P), b(P);
  for (int i = 0; i < P; ++i) {
    const double angle = i * M_PI / 3 + 0.3;
    a[i] = 0.5 + (2 + radial_noise[i]) * std::cos(angle);
    b[i] = -0.3 + (2 + radial_noise[i]) * std::sin(angle);
  }
  const int n = 3 + 2 * P;

  FunctionalProblem::Callbacks cb;
  cb.f = [a, b](const Vector& x) {
    double s = 0;
    for (int i = 0; i < P; ++i)
      s += std::pow(x[3 + 2 * i] - a[i], 2) + std::pow(x[4 + 2 * i] - b[i], 2);
    return s;
  };
  cb.g = [a, b, n](const Vector& x) {
    Vector g = Vector::Zero(n);
    for (int i = 0; i < P; ++i) {
      g[3 + 2 * i] = 2 * (x[3 + 2 * i] - a[i]);
      g[4 + 2 * i] = 2 * (x[4 + 2 * i] - b[i]);
    }
    return g;
  };
  cb.H = [n](const Vector&) {
    Matrix H = Matrix::Zero(n, n);
    H.diagonal().tail(2 * P).setConstant(2);
    return H;
  };
  cb.c = [](const Vector& x) {
    Vector c(P);
    for (int i = 0; i < P; ++i)
      c[i] = std::pow(x[3 + 2 * i] - x[0], 2) +
             std::pow(x[4 + 2 * i] - x[1], 2) - x[2] * x[2];
    return c;
  };
  cb.J = [n](const Vector& x) {
    Matrix J = Matrix::Zero(P, n);
    for (int i = 0; i < P; ++i) {
      const double du = x[3 + 2 * i] - x[0];
      const double dv = x[4 + 2 * i] - x[1];
      J(i, 0) = -2 * du;
      J(i, 1) = -2 * dv;
      J(i, 2) = -2 * x[2];
      J(i, 3 + 2 * i) = 2 * du;
      J(i, 4 + 2 * i) = 2 * dv;
    }
    return J;
  };
  cb.C = [n](const Vector&, int i) {
    Matrix C = Matrix::Zero(n, n);
    const int u = 3 + 2 * i;
    C(0, 0) = 2;
    C(u, u) = 2;
    set_sym(C, 0, u, -2);
    C(1, 1) = 2;
    C(u + 1, u + 1) = 2;
    set_sym(C, 1, u + 1, -2);
    C(2, 2) = -2;
    return C;
  };

  Vector x0 = Vector::Zero(n);
  x0[2] = 1;
  for (int i = 0; i < P; ++i) {
    x0[3 + 2 * i] = a[i];
    x0[4 + 2 * i] = b[i];
  }

  // Geometric fit by Gauss-Newton on the radial residuals, then project the
  // data onto the fitted circle to seed the KKT refinement.
  Eigen::Vector3d center_radius(a.mean(), b.mean(), 2.0);
  for (int it = 0; it < 50; ++it) {
    Eigen::Matrix<double, P, 3> Jr;
    Eigen::Matrix<double, P, 1> r;
    for (int i = 0; i < P; ++i) {
      const double du = a[i] - center_radius[0];
      const double dv = b[i] - center_radius[1];
      const double dist = std::hypot(du, dv);
      r[i] = dist - center_radius[2];
      Jr.row(i) << -du / dist, -dv / dist, -1;
    }
    center_radius -= Jr.colPivHouseholderQr().solve(r);
  }
  Vector guess(n);
  guess.head(3) = center_radius;
  for (int i = 0; i < P; ++i) {
    const double du = a[i] - center_radius[0];
    const double dv = b[i] - center_radius[1];
    const double dist = std::hypot(du, dv);
    guess[3 + 2 * i] = center_radius[0] + center_radius[2] * du / dist;
    guess[4 + 2 * i] = center_radius[1] + center_radius[2] * dv / dist;
  }
  return finish("orthreg-circle",
                std::make_shared<FunctionalProblem>("orthreg-circle", n, P, cb),
                x0, guess);
}

std::shared_ptr<const Problem> quadratic_circle_problem(
    std::string name, std::function<double(const Vector&)> f,
    std::function<Vector(const Vector&)> g,
    std::function<Matrix(const Vector&)> H, Eigen::Vector2d center,
    double radius) {
  FunctionalProblem::Callbacks cb;
  cb.f = std::move(f);
  cb.g = std::move(g);
  cb.H = std::move(H);
  cb.c = [center, radius](const Vector& x) {
    return vec({(x - center).squaredNorm() - radius * radius});
  };
  cb.J = [center](const Vector& x) {
    Matrix J(1, 2);
    J.row(0) = 2 * (x - center).transpose();
    return J;
  };
  cb.C = [](const Vector&, int) { return symmetric2(2, 0, 2); };
  return std::make_shared<FunctionalProblem>(std::move(name), 2, 1, cb);
}

}  // namespace

TestProblem maratos_counterexample() {
  auto problem = quadratic_circle_problem(
      "maratos", [](const Vector& x) { return x.squaredNorm(); },
      [](const Vector& x) { return Vector(2 * x); },
      [](const Vector&) { return symmetric2(2, 0, 2); },
      Eigen::Vector2d(-1, 0), 2.0);
  TestProblem tp;
  tp.key = "maratos";
  tp.problem = problem;
  tp.start.x0 = vec({std::sqrt(2.0) - 1, std::sqrt(2.0)});
  tp.reference = PrimalDual{vec({1, 0}), vec({-0.5})};
  tp.reference_objective = 1.0;
  return tp;
}

TestProblem constrained_rosenbrock() {
  auto problem = quadratic_circle_problem(
      "rosenbrock-circle",
      [](const Vector& x) {
        return std::pow(1 - x[0], 2) + 100 * std::pow(x[1] - x[0] * x[0], 2);
      },
      [](const Vector& x) {
        const double r = x[1] - x[0] * x[0];
        return vec({-2 * (1 - x[0]) - 400 * x[0] * r, 200 * r});
      },
      [](const Vector& x) {
        return symmetric2(2 - 400 * (x[1] - x[0] * x[0]) + 800 * x[0] * x[0],
                          -400 * x[0], 200);
      },
      Eigen::Vector2d(-2, 1), 3.0);
  TestProblem tp;
  tp.key = "rosenbrock-circle";
  tp.problem = problem;
  tp.start.x0 = vec({-1.1, 1.0});
  tp.reference = PrimalDual{vec({1, 1}), vec({0.0})};
  tp.reference_objective = 0.0;
  return tp;
}

TestProblem linear_problem(const Vector& a, const Matrix& B, const Vector& b) {
  if (B.cols() != a.size() || B.rows() != b.size())
    throw DimensionError("linear problem data has inconsistent shapes");
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(B.rows());
  FunctionalProblem::Callbacks cb;
  cb.f = [a](const Vector& x) { return a.dot(x); };
  cb.g = [a](const Vector&) { return a; };
  cb.H = [n](const Vector&) { return Matrix(Matrix::Zero(n, n)); };
  cb.c = [B, b](const Vector& x) { return Vector(B * x - b); };
  cb.J = [B](const Vector&) { return B; };
  cb.C = [n](const Vector&, int) { return Matrix(Matrix::Zero(n, n)); };
  TestProblem tp;
  tp.key = "linear";
  tp.problem = std::make_shared<FunctionalProblem>("linear", n, m, cb);
  tp.start.x0 = Vector::Zero(n);
  return tp;
}

std::vector<std::string> analytic_bank_keys() {
  return {"maratos", "rosenbrock-circle", "hs006", "hs007",
          "hs027",   "hs039",             "hs040", "hs042",
          "hs077",   "hs079",             "hs100lnp", "orthreg-circle"};
}

namespace {

std::optional<TestProblem> bank_problem(std::string_view key) {
  if (key == "maratos") return maratos_counterexample();
  if (key == "rosenbrock-circle") return constrained_rosenbrock();
  if (key == "hs006") return hs006();
  if (key == "hs007") return hs007();
  if (key == "hs027") return hs027();
  if (key == "hs039") return hs039();
  if (key == "hs040") return hs040();
  if (key == "hs042") return hs042();
  if (key == "hs077") return hs077();
  if (key == "hs079") return hs079();
  if (key == "hs100lnp") return hs100lnp();
  if (key == "orthreg-circle") return orthreg_circle();
  return std::nullopt;
}

// Synthetic data does not depend on the run seed, so replications share one
// dataset and differ in constraints, start point and sampling.
constexpr std::uint64_t kSyntheticDataSeed = 20240607;

}  // namespace

std::vector<TestProblem> analytic_bank() {
  std::vector<TestProblem> bank;
  for (const auto& key : analytic_bank_keys()) bank.push_back(*bank_problem(key));
  return bank;
}

TestProblem make_test_problem(const std::string& key, std::uint64_t seed) {
  if (auto tp = bank_problem(key)) return *tp;

  LabeledData data;
  if (key.rfind("logistic:", 0) == 0) {
    data = load_libsvm(key.substr(9));
  } else if (key.rfind("logistic-synthetic:", 0) == 0) {
    const std::string dims = key.substr(19);
    const auto x = dims.find('x');
    int samples = 0, features = 0;
    try {
      if (x == std::string::npos) throw std::invalid_argument("missing x");
      std::size_t used = 0;
      samples = std::stoi(dims.substr(0, x), &used);
      if (used != x) throw std::invalid_argument("trailing characters");
      features = std::stoi(dims.substr(x + 1), &used);
      if (used != dims.size() - x - 1)
        throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ConfigError("expected logistic-synthetic:<N>x<n>, got '" + key + "'");
    }
    data = synthetic_classification(samples, features, kSyntheticDataSeed);
  } else {
    throw ConfigError("unknown problem key '" + key + "'");
  }

  auto problem = make_logistic_problem(
      make_logistic_spec(std::move(data), ConstraintOptions{}, seed));
  TestProblem tp;
  tp.key = key;
  tp.start = default_start(*problem, seed);
  tp.problem = std::move(problem);
  return tp;
}

}  // namespace msqp
