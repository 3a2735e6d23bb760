#include <doctest.h>

#include <cmath>
#include <random>

#include "msqp/profiles.hpp"
#include "msqp/suite.hpp"

using namespace msqp;

namespace {

constexpr double F = CostTable::failure;

CostTable table(std::vector<std::string> methods, std::vector<std::vector<double>> cost) {
  CostTable t;
  t.methods = std::move(methods);
  for (std::size_t p = 0; p < cost.size(); ++p) t.problems.push_back("p" + std::to_string(p + 1));
  t.cost = std::move(cost);
  return t;
}

double rho_at(const ProfileTable& p, std::size_t s, double ratio) {
  for (std::size_t i = 0; i < p.grid.size(); ++i)
    if (p.grid[i] == ratio) return p.rho[s][i];
  FAIL("ratio not on the grid");
  return -1;
}

}  // namespace

TEST_SUITE("profiles") {

TEST_CASE("single method solving everything has rho(1) = 1") {
  const ProfileTable p = dolan_more_profile(table({"A"}, {{3}, {7}, {1}}));
  CHECK(p.grid == std::vector<double>{1.0});
  CHECK(p.rho[0][0] == 1.0);
  CHECK(p.solved_fraction[0] == 1.0);
}

TEST_CASE("two methods with costs 1 and 2 on one problem") {
  const ProfileTable p = dolan_more_profile(table({"A", "B"}, {{1, 2}}));
  CHECK(p.grid == std::vector<double>{1.0, 2.0});
  CHECK(rho_at(p, 0, 1) == 1.0);
  CHECK(rho_at(p, 1, 1) == 0.0);
  CHECK(rho_at(p, 1, 2) == 1.0);
}

TEST_CASE("method failing everywhere has a zero curve") {
  const ProfileTable p = dolan_more_profile(table({"A", "B"}, {{2, F}, {5, F}, {1, F}}));
  for (double v : p.rho[1]) CHECK(v == 0.0);
  CHECK(p.solved_fraction[1] == 0.0);
  CHECK(p.rho[0].back() == 1.0);
}

TEST_CASE("three methods with failures and an all-failure row") {
  const ProfileTable p = dolan_more_profile(
      table({"A", "B", "C"}, {{2, 4, F}, {10, 5, 5}, {F, F, F}, {3, F, 12}}));
  CHECK(p.dropped == std::vector<std::string>{"p3"});
  CHECK(p.grid == std::vector<double>{1, 2, 4});
  const double third = 1.0 / 3, two_thirds = 2.0 / 3;
  CHECK(p.rho[0] == std::vector<double>{two_thirds, 1, 1});
  CHECK(p.rho[1] == std::vector<double>{third, two_thirds, two_thirds});
  CHECK(p.rho[2] == std::vector<double>{third, third, two_thirds});
  CHECK(p.solved_fraction == std::vector<double>{1, two_thirds, two_thirds});
}

TEST_CASE("explicit grids are honored") {
  const ProfileTable p = dolan_more_profile(table({"A", "B"}, {{1, 3}, {2, 1}}), {1, 1.5, 4});
  CHECK(p.grid == std::vector<double>{1, 1.5, 4});
  CHECK(p.rho[0] == std::vector<double>{0.5, 0.5, 1});
  CHECK(p.rho[1] == std::vector<double>{0.5, 0.5, 1});
}

TEST_CASE("profiles are nondecreasing and approach the solve fraction on random tables") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> cost(1.0, 100.0);
  std::bernoulli_distribution fails(0.2);
  for (int trial = 0; trial < 200; ++trial) {
    const int S = 2 + trial % 4, P = 1 + trial % 13;
    std::vector<std::vector<double>> c(P, std::vector<double>(S));
    for (auto& row : c)
      for (double& v : row) v = fails(rng) ? F : std::round(cost(rng));
    std::vector<std::string> methods;
    for (int s = 0; s < S; ++s) methods.push_back("m" + std::to_string(s));
    const ProfileTable p = dolan_more_profile(table(methods, c));
    const std::size_t kept = P - p.dropped.size();
    for (int s = 0; s < S; ++s) {
      for (std::size_t i = 1; i < p.grid.size(); ++i) CHECK(p.rho[s][i] >= p.rho[s][i - 1]);
      if (kept > 0) CHECK(p.rho[s].back() == doctest::Approx(p.solved_fraction[s]));
    }
    if (kept > 0) {
      // Some method is best on every kept problem.
      double best_sum = 0;
      for (int s = 0; s < S; ++s) best_sum += p.rho[s][0];
      CHECK(best_sum >= 1.0 - 1e-12);
    }
  }
}

TEST_CASE("Morales values: equal, four-times cheaper, failures, clipping") {
  const auto v = morales_profile(
      table({"A", "B"}, {{5, 5}, {4, 16}, {F, 3}, {3, F}, {1, 2000}, {F, F}}));
  CHECK(v == std::vector<double>{0, 2, -kMoralesCap, kMoralesCap, kMoralesCap, 0});
  CHECK(kMoralesCap == 10.0);
}

TEST_CASE("Morales profiles need exactly two methods") {
  CHECK_THROWS(morales_profile(table({"A", "B", "C"}, {{1, 2, 3}})));
  CHECK_THROWS(morales_profile(table({"A"}, {{1}})));
  CostTable ragged = table({"A", "B"}, {{1, 2}});
  ragged.problems.push_back("extra");
  CHECK_THROWS(morales_profile(ragged));
}

TEST_CASE("branch statistics") {
  CHECK_THROWS(branch_statistics({}));
  std::vector<IterationRecord> trace(4);
  trace[0].alpha = 0.5;
  trace[0].branch = Branch::classical_large_d;
  trace[1].branch = Branch::unit_classical;
  trace[2].branch = Branch::unit_classical;
  trace[3].branch = Branch::unit_classical;
  trace[3].tau = 0.3;
  trace[3].gamma = 2.0;
  const BranchStatistics s = branch_statistics(trace);
  CHECK(s.modified_fraction == 0.0);
  CHECK(s.unit_step_fraction == 0.75);
  CHECK(s.final_tau == 0.3);
  CHECK(s.final_gamma == 2.0);
}

TEST_CASE("Maratos run reports modified iterations and near-total unit steps") {
  const TestProblem tp = maratos_counterexample();
  const SolveOutcome out = solve(tp.problem, tp.start, {});
  const BranchStatistics s = branch_statistics(out.trace);
  CHECK(s.modified_fraction > 0);
  CHECK(s.unit_step_fraction >= (s.iterations - 1.0) / s.iterations);
}

}  // TEST_SUITE
