#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "msqp/solver.hpp"

namespace msqp {

/// cost[p][s] for problem p and method s; +∞ marks a failure.
struct CostTable {
  std::vector<std::string> methods;
  std::vector<std::string> problems;
  std::vector<std::vector<double>> cost;

  static constexpr double failure = std::numeric_limits<double>::infinity();
};

/**
 * Dolan-Moré curves: rho[s][i] is the fraction of kept problems with
 * cost ≤ grid[i]·best. Problems that every method fails are dropped and
 * listed in `dropped`.
 */
struct ProfileTable {
  std::vector<std::string> methods;
  std::vector<double> grid;
  std::vector<std::vector<double>> rho;
  /// Per-method fraction of kept problems solved (the right limit of rho).
  std::vector<double> solved_fraction;
  std::vector<std::string> dropped;
};

/// `grid` empty selects the distinct finite ratios plus 1.
ProfileTable dolan_more_profile(const CostTable& table,
                                std::vector<double> grid = {});

/// Cap used for failures in Morales profiles.
inline constexpr double kMoralesCap = 10.0;

/**
 * Per-problem −log₂(cost_A / cost_B) for the two methods of the table,
 * clipped to ±kMoralesCap; positive favors the first method. A fails and B
 * solves → −cap, the reverse → +cap, both fail → 0.
 */
std::vector<double> morales_profile(const CostTable& table);

struct BranchStatistics {
  int iterations = 0;
  double unit_step_fraction = 0;
  double modified_fraction = 0;
  double final_tau = 0;
  double final_gamma = 0;
};

/// Throws std::invalid_argument on an empty trace.
BranchStatistics branch_statistics(std::span<const IterationRecord> trace);

}  // namespace msqp
