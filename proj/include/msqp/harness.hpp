#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "msqp/profiles.hpp"
#include "msqp/solver.hpp"
#include "msqp/trace.hpp"

namespace msqp {

/**
 * Reads solver settings from an INI file. Keys live in a `[solver]` section;
 * unknown keys raise ConfigError. See README for the key list.
 */
SolverConfig load_solver_config(const std::filesystem::path& path);
SolverConfig solver_config_from_ini(const std::string& text);
/// Canonical `key=value` listing of every setting, used for hashing.
std::string describe(const SolverConfig& config);

/// FNV-1a, 64 bit.
std::uint64_t fnv1a64(const std::string& data);

/// Every budget must be positive; +∞ leaves that counter unbounded.
struct Budgets {
  int iterations = 100;
  /// Multiples of one full pass (N component evaluations).
  double function_evals = std::numeric_limits<double>::infinity();
  double hessian_evals = std::numeric_limits<double>::infinity();
  /// Multiples of (n + m)·N MINRES iterations.
  double minres_iters = std::numeric_limits<double>::infinity();
};

struct ExperimentPlan {
  std::vector<std::string> problems;
  std::vector<std::string> methods;
  std::vector<std::uint64_t> seeds;
  Budgets budgets;
  SolverConfig solver;
  int workers = 1;

  /// Throws ConfigError for empty lists, duplicate keys or bad budgets.
  void validate() const;
};

/**
 * INI plan:
 *   [plan]     problems, methods (comma lists), seeds (list) or
 *              replications = R (seeds 0..R−1), workers
 *   [budgets]  iterations, function_evals, hessian_evals, minres_iters
 *   [solver]   as in load_solver_config
 */
ExperimentPlan load_plan(const std::filesystem::path& path);
ExperimentPlan plan_from_ini(const std::string& text);

struct ManifestEntry {
  std::string id;
  std::string problem;
  std::string method;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::string trace_file;
  std::string summary_file;
  std::string status;
};

struct Manifest {
  std::vector<ManifestEntry> runs;
  /// Runs executed by this call (the rest were resumed from disk).
  int executed = 0;
  int skipped = 0;

  bool all_converged() const;
};

/// Per-(problem, method) means over seeds.
struct AggregateRow {
  std::string problem;
  std::string method;
  int replications = 0;
  double success_fraction = 0;
  double mean_iterations = 0;
  double mean_function_evals = 0;
  double mean_gradient_evals = 0;
  double mean_hessian_evals = 0;
  double mean_minres_iterations = 0;
  double mean_final_stationarity = 0;
  double mean_final_feasibility = 0;
  double mean_modified_fraction = 0;
};

std::vector<AggregateRow> aggregate(const std::vector<RunSummary>& runs);

/**
 * Runs every (problem, method, seed) triple not already completed under the
 * same configuration hash. Each run writes `<id>.trace.csv` and
 * `<id>.summary.json` atomically; `manifest.json` and `aggregate.json` are
 * rewritten after every run.
 */
Manifest run_plan(const ExperimentPlan& plan, const std::filesystem::path& out_dir);

/// Reads `manifest.json` from a results directory.
Manifest read_manifest(const std::filesystem::path& dir);

/// Solves one instance with the plan's budgets applied.
SolveOutcome run_single(const std::string& problem_key, const std::string& method,
                        std::uint64_t seed, const SolverConfig& solver,
                        const Budgets& budgets);

enum class CostMetric { iterations, function_evals, hessian_evals };

CostMetric parse_cost_metric(const std::string& key);

/// Rows are (problem, seed) instances; failures cost +∞.
CostTable cost_table(const std::vector<RunSummary>& runs, CostMetric metric);

/// Loads every summary listed in a results directory's manifest.
std::vector<RunSummary> load_summaries(const std::filesystem::path& dir);

}  // namespace msqp
