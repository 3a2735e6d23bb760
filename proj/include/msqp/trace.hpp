#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "msqp/solver.hpp"

namespace msqp {

/// Fixed CSV column order shared by every method.
const std::vector<std::string>& trace_columns();

/// Header plus one row per IterationRecord. Vectors are `;`-separated and
/// doubles are written with 17 significant digits, so rows round-trip.
void write_trace_csv(std::ostream& out, const SolveOutcome& outcome);

/// Parses a trace written by write_trace_csv. Throws ParseError.
std::vector<IterationRecord> read_trace_csv(std::istream& in);

/// Per-run summary as stored next to each trace.
struct RunSummary {
  std::string method;
  std::string problem;
  std::uint64_t seed = 0;
  std::string status;
  std::string message;
  int iterations = 0;
  double final_objective = 0;
  double final_stationarity = 0;
  double final_feasibility = 0;
  OracleCounters counters;
  int minres_iterations = 0;
  double seconds = 0;
  double unit_step_fraction = 0;
  double modified_fraction = 0;
  double final_tau = 0;
  double final_gamma = 0;

  bool converged() const { return status == "converged"; }
};

RunSummary summarize(const SolveOutcome& outcome, std::uint64_t seed);
std::string to_json(const RunSummary& summary);
/// Throws ParseError on malformed input.
RunSummary summary_from_json(const std::string& text);

}  // namespace msqp
