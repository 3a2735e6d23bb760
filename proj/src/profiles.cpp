#include "msqp/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace msqp {

namespace {

void check_shape(const CostTable& t) {
  if (t.methods.empty() || t.problems.empty())
    throw std::invalid_argument("cost table needs methods and problems");
  if (t.cost.size() != t.problems.size())
    throw std::invalid_argument("cost rows do not match the problem list");
  for (const auto& row : t.cost) {
    if (row.size() != t.methods.size())
      throw std::invalid_argument("cost row does not match the method list");
    for (double c : row)
      if (!(c > 0)) throw std::invalid_argument("costs must be positive");
  }
}

}  // namespace

ProfileTable dolan_more_profile(const CostTable& table, std::vector<double> grid) {
  check_shape(table);
  const std::size_t S = table.methods.size();
  ProfileTable out;
  out.methods = table.methods;

  std::vector<std::vector<double>> ratios;  // per kept problem
  for (std::size_t p = 0; p < table.problems.size(); ++p) {
    const auto& row = table.cost[p];
    const double best = *std::min_element(row.begin(), row.end());
    if (!std::isfinite(best)) {
      out.dropped.push_back(table.problems[p]);
      continue;
    }
    std::vector<double> r(S);
    for (std::size_t s = 0; s < S; ++s) r[s] = row[s] / best;
    ratios.push_back(std::move(r));
  }

  if (grid.empty()) {
    grid.push_back(1.0);
    for (const auto& r : ratios)
      for (double v : r)
        if (std::isfinite(v)) grid.push_back(v);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  out.grid = grid;

  const double kept = static_cast<double>(ratios.size());
  out.rho.assign(S, std::vector<double>(grid.size(), 0.0));
  out.solved_fraction.assign(S, 0.0);
  if (ratios.empty()) return out;
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      double count = 0;
      for (const auto& r : ratios)
        if (r[s] <= grid[i]) ++count;
      out.rho[s][i] = count / kept;
    }
    double solved = 0;
    for (const auto& r : ratios)
      if (std::isfinite(r[s])) ++solved;
    out.solved_fraction[s] = solved / kept;
  }
  return out;
}

std::vector<double> morales_profile(const CostTable& table) {
  check_shape(table);
  if (table.methods.size() != 2)
    throw std::invalid_argument("Morales profiles compare exactly two methods");
  std::vector<double> values;
  values.reserve(table.problems.size());
  for (const auto& row : table.cost) {
    const bool a_ok = std::isfinite(row[0]);
    const bool b_ok = std::isfinite(row[1]);
    double v = 0;
    if (a_ok && b_ok) {
      v = std::clamp(std::log2(row[1] / row[0]), -kMoralesCap, kMoralesCap);
    } else if (a_ok) {
      v = kMoralesCap;
    } else if (b_ok) {
      v = -kMoralesCap;
    }
    values.push_back(v);
  }
  return values;
}

BranchStatistics branch_statistics(std::span<const IterationRecord> trace) {
  if (trace.empty()) throw std::invalid_argument("empty trace");
  BranchStatistics s;
  s.iterations = static_cast<int>(trace.size());
  int unit = 0, modified = 0;
  for (const IterationRecord& r : trace) {
    if (r.alpha == 1.0) ++unit;
    if (r.branch == Branch::modified) ++modified;
  }
  s.unit_step_fraction = static_cast<double>(unit) / s.iterations;
  s.modified_fraction = static_cast<double>(modified) / s.iterations;
  s.final_tau = trace.back().tau;
  s.final_gamma = trace.back().gamma;
  return s;
}

}  // namespace msqp
