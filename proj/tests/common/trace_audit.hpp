#pragma once

// Post-hoc checks on recorded solver traces. Each audit returns a list of
// human-readable violations; an empty list means the trace passed.

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "msqp/solver.hpp"

namespace msqp::audit {

using Violations = std::vector<std::string>;

inline std::string at(const IterationRecord& r, const std::string& what) {
  std::ostringstream s;
  s << "k=" << r.k << ": " << what;
  return s.str();
}

inline Vector next_x(const SolveOutcome& out, std::size_t i) {
  return i + 1 < out.trace.size() ? out.trace[i + 1].x : out.final.x;
}

inline Vector next_y(const SolveOutcome& out, std::size_t i) {
  return i + 1 < out.trace.size() ? out.trace[i + 1].y : out.final.y;
}

/// τ positive and nonincreasing over the rows that carry a merit parameter.
inline Violations tau_monotone(const SolveOutcome& out) {
  Violations v;
  double prev = INFINITY;
  for (const auto& r : out.trace) {
    if (std::isnan(r.tau)) continue;
    if (!(r.tau > 0)) v.push_back(at(r, "tau not positive"));
    if (r.tau > prev) v.push_back(at(r, "tau increased"));
    prev = r.tau;
  }
  return v;
}

/// Δl ≥ τ max(dᵀWd, 0) + σ‖c‖₁ after the τ update.
inline Violations model_reduction_bound(const SolveOutcome& out, double sigma) {
  Violations v;
  for (const auto& r : out.trace) {
    if (std::isnan(r.tau)) continue;
    const double rhs = r.tau * std::max(r.dWd, 0.0) + sigma * r.c_l1;
    if (r.delta_l < rhs - 1e-10 * std::max(1.0, std::abs(rhs)))
      v.push_back(at(r, "model reduction below its guaranteed floor"));
  }
  return v;
}

/// Every accepted row satisfies its recorded inequality lhs ≤ rhs, except
/// watchdog relaxed steps, which are accepted unconditionally.
inline Violations recorded_inequalities(const SolveOutcome& out) {
  Violations v;
  for (const auto& r : out.trace) {
    if (r.branch == Branch::watchdog_relaxed) continue;
    if (!(r.lhs <= r.rhs)) v.push_back(at(r, "accepted step violates its inequality"));
  }
  return v;
}

/**
 * Recomputes the deciding inequality from problem evaluations for the rows
 * of the modified method and the ℓ1 baseline. Requires exact oracles and
 * recorded iterates.
 */
inline Violations recomputed_inequalities(const Problem& problem, const SolveOutcome& out,
                                          const SolverConfig& cfg) {
  Violations v;
  auto phi = [&](const Vector& x, double tau) {
    return tau * problem.objective(x) + problem.constraints(x).lpNorm<1>();
  };
  for (std::size_t i = 0; i < out.trace.size(); ++i) {
    const auto& r = out.trace[i];
    const bool classical_like = r.branch == Branch::classical_large_d ||
                                r.branch == Branch::unit_classical ||
                                r.branch == Branch::classical;
    if (!classical_like && r.branch != Branch::modified) continue;
    const Vector x1 = r.x + r.alpha * r.d;
    const double lhs = phi(x1, r.tau);
    double rhs = phi(r.x, r.tau) - cfg.eta * r.alpha * r.delta_l + r.eps_A;
    if (r.branch == Branch::modified)
      rhs += 0.5 * r.alpha * r.alpha * (r.tau * r.dHd + r.sum_abs_dCid);
    const double scale = 1e-12 * std::max(1.0, std::abs(rhs));
    if (std::abs(lhs - r.lhs) > scale) v.push_back(at(r, "recomputed lhs differs"));
    if (std::abs(rhs - r.rhs) > scale) v.push_back(at(r, "recomputed rhs differs"));
    if (lhs > rhs + 1e-12) v.push_back(at(r, "recomputed inequality fails"));
    if (classical_like && phi(next_x(out, i), r.tau) >
                              phi(r.x, r.tau) - cfg.eta * r.alpha * r.delta_l + 1e-12)
      v.push_back(at(r, "classical branch without sufficient descent"));
  }
  return v;
}

/// γ never increases and drops exactly after modified-branch rows.
inline Violations gamma_schedule(const SolveOutcome& out) {
  Violations v;
  for (std::size_t i = 0; i + 1 < out.trace.size(); ++i) {
    const auto& r = out.trace[i];
    const double next = out.trace[i + 1].gamma;
    if (next > r.gamma) v.push_back(at(r, "gamma increased"));
    const bool dropped = next < r.gamma;
    if (dropped != (r.branch == Branch::modified))
      v.push_back(at(r, "gamma change does not match the branch"));
  }
  return v;
}

/// classical_large_d exactly when ‖d‖ > γ.
inline Violations branch_gate(const SolveOutcome& out) {
  Violations v;
  for (const auto& r : out.trace) {
    if ((r.branch == Branch::classical_large_d) != (r.d_norm > r.gamma))
      v.push_back(at(r, "branch does not match the ‖d‖ > γ gate"));
  }
  return v;
}

/// y_{k+1} = y_k + δ_k bit for bit. A watchdog restart steps from its
/// anchor, so the anchor's multiplier and δ apply there.
inline Violations full_dual_step(const SolveOutcome& out) {
  Violations v;
  for (std::size_t i = 0; i < out.trace.size(); ++i) {
    const auto& r = out.trace[i];
    const auto& from = r.branch == Branch::watchdog_restart ? out.trace.at(r.anchor) : r;
    const Vector expected = from.y + from.delta;
    if (next_y(out, i) != expected) v.push_back(at(r, "dual step is not the full δ"));
  }
  return v;
}

inline Violations operator+(Violations a, const Violations& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

/// Every invariant that applies to the modified method.
inline Violations modified_method_invariants(const Problem& problem, const SolveOutcome& out,
                                             const SolverConfig& cfg, bool exact) {
  Violations v = tau_monotone(out) + model_reduction_bound(out, cfg.sigma) +
                 recorded_inequalities(out) + gamma_schedule(out) + branch_gate(out) +
                 full_dual_step(out);
  if (exact) v = v + recomputed_inequalities(problem, out, cfg);
  return v;
}

inline std::string join(const Violations& v, std::size_t limit = 5) {
  std::string s;
  for (std::size_t i = 0; i < v.size() && i < limit; ++i) s += v[i] + "; ";
  if (v.size() > limit) s += "(" + std::to_string(v.size() - limit) + " more)";
  return s;
}

}  // namespace msqp::audit
