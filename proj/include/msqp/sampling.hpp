#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "msqp/problem.hpp"

namespace msqp {

enum class ScheduleKind { full, constant_fraction, geometric_gap, adaptive_hessian };

/**
 * Sample-size schedule k ↦ |S_k| ∈ [1, N].
 *
 *  - full: N.
 *  - constant_fraction(p): clamp(⌈pN⌉, 1, N).
 *  - geometric_gap(r): gap₀ = N − s₀, gap_{k+1} = ⌊r·gap_k⌋, |S_k| = N − gap_k.
 *  - adaptive_hessian: clamp(⌊(1 − 0.95^{(k+2)/2}) N⌋, 1, N).
 */
class SampleSchedule {
 public:
  SampleSchedule() = default;

  ScheduleKind kind() const { return kind_; }
  int population() const { return N_; }
  double parameter() const { return parameter_; }
  int initial_size() const { return initial_; }
  int size(int k) const;
  /// Key that parses back to this schedule.
  std::string key() const;

 private:
  friend SampleSchedule build_schedule(ScheduleKind, double, int, int, int, int);

  ScheduleKind kind_ = ScheduleKind::full;
  int N_ = 1;
  double parameter_ = 1.0;
  int initial_ = 1;
};

/**
 * Constructs a schedule and verifies it over k = 0..horizon: sizes within
 * [max(1, min_size), N]; nondecreasing for the growing kinds; for the
 * geometric gap, gap_{k+1} ≤ r·gap_k and Σ gap_k/N ≤ gap₀/(N(1−r)).
 * `initial_size` only applies to the geometric gap (≤ 0 selects ⌈0.05N⌉).
 * Throws ConfigError naming the violated condition.
 */
SampleSchedule build_schedule(ScheduleKind kind, double parameter, int N,
                              int horizon, int initial_size = 0,
                              int min_size = 1);

/// Parses `full`, `frac:<p>`, `geo:<r>[:<s0>]` or `adaptive-hess`.
SampleSchedule parse_schedule(const std::string& key, int N, int horizon);

/**
 * `size` distinct indices from {0..N−1}, uniform without replacement and
 * sorted. Deterministic in (seed, iteration, stream); size = N returns all.
 */
std::vector<int> draw_samples(int N, int size, std::uint64_t seed,
                              int iteration, int stream = 0);

struct SubsampledEstimates {
  double f = 0;
  Vector g;
  Matrix H;
};

/// Sample means of f_i, ∇f_i, ∇²f_i over the three index sets.
SubsampledEstimates subsampled_estimates(Oracle& oracle, const Vector& x,
                                         std::span<const int> S_f,
                                         std::span<const int> S_g,
                                         std::span<const int> S_H);

/// Uniform bounds B_f ≥ |f_i|, B_g ≥ ‖∇f_i‖, B_H ≥ ‖∇²f_i‖₂.
struct BoundConstants {
  enum class Source { configured, estimated };

  double kf_bound = 0;
  double kg_bound = 0;
  double kh_bound = 0;
  Source source = Source::configured;
};

/**
 * Component-wise maxima at x. `probe` > 0 restricts the scan to a seeded
 * subset of that size; 0 scans all N components.
 */
BoundConstants estimate_bound_constants(const FiniteSumProblem& problem,
                                        const Vector& x, int probe = 0,
                                        std::uint64_t seed = 0);

struct ErrorBounds {
  double eps_f = 0;
  double eps_g = 0;
  double eps_H = 0;
};

/// ε = 2·((N − |S|)/N)·B for each of the three estimates.
ErrorBounds error_bounds(int N, int size_f, int size_g, int size_H,
                         const BoundConstants& constants);

}  // namespace msqp
