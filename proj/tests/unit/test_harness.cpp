#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include <json.hpp>

#include "msqp/errors.hpp"
#include "msqp/harness.hpp"

using namespace msqp;
namespace fs = std::filesystem;

namespace {

struct ScratchDir {
  fs::path path;
  explicit ScratchDir(const std::string& name) {
    std::random_device rd;
    path = fs::temp_directory_path() / ("msqp-test-" + name + "-" + std::to_string(rd()));
    fs::remove_all(path);
  }
  ~ScratchDir() { fs::remove_all(path); }
};

ExperimentPlan small_plan() {
  ExperimentPlan plan;
  plan.problems = {"maratos"};
  plan.methods = {"ours", "sqp-l1"};
  plan.seeds = {0};
  return plan;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("run_plan writes one trace per run plus a manifest") {
  ScratchDir dir("cardinality");
  const Manifest m = run_plan(small_plan(), dir.path);
  CHECK(m.runs.size() == 2);
  CHECK(m.executed == 2);
  CHECK(m.skipped == 0);
  int traces = 0;
  for (const auto& e : fs::directory_iterator(dir.path))
    traces += e.path().string().ends_with(".trace.csv");
  CHECK(traces == 2);
  CHECK(fs::exists(dir.path / "manifest.json"));
  CHECK(fs::exists(dir.path / "aggregate.json"));
  CHECK(m.all_converged());
}

TEST_CASE("rerunning a completed plan executes nothing") {
  ScratchDir dir("resume");
  run_plan(small_plan(), dir.path);
  const auto stamp = fs::last_write_time(dir.path / "maratos__ours__s0.trace.csv");
  const Manifest again = run_plan(small_plan(), dir.path);
  CHECK(again.executed == 0);
  CHECK(again.skipped == 2);
  CHECK(fs::last_write_time(dir.path / "maratos__ours__s0.trace.csv") == stamp);
}

TEST_CASE("a changed configuration reruns the affected runs") {
  ScratchDir dir("rehash");
  run_plan(small_plan(), dir.path);
  ExperimentPlan changed = small_plan();
  changed.solver.eta = 2e-4;
  const Manifest m = run_plan(changed, dir.path);
  CHECK(m.executed == 2);
}

TEST_CASE("a deleted artifact is regenerated") {
  ScratchDir dir("repair");
  run_plan(small_plan(), dir.path);
  fs::remove(dir.path / "maratos__sqp-l1__s0.summary.json");
  const Manifest m = run_plan(small_plan(), dir.path);
  CHECK(m.executed == 1);
  CHECK(fs::exists(dir.path / "maratos__sqp-l1__s0.summary.json"));
}

TEST_CASE("manifest entries reference existing files with matching hashes") {
  ScratchDir dir("complete");
  ExperimentPlan plan = small_plan();
  plan.problems.push_back("hs040");
  plan.seeds = {0, 1};
  plan.workers = 3;
  const Manifest m = run_plan(plan, dir.path);
  const Manifest stored = read_manifest(dir.path);
  REQUIRE(stored.runs.size() == 8);
  for (const auto& e : stored.runs) {
    CHECK(fs::exists(dir.path / e.trace_file));
    CHECK(fs::exists(dir.path / e.summary_file));
    const auto it = std::find_if(m.runs.begin(), m.runs.end(),
                                 [&](const ManifestEntry& r) { return r.id == e.id; });
    REQUIRE(it != m.runs.end());
    CHECK(it->config_hash == e.config_hash);
  }
  std::set<std::string> ids;
  for (const auto& e : stored.runs) ids.insert(e.id);
  CHECK(ids.size() == 8);
}

TEST_CASE("replications are averaged arithmetically") {
  ScratchDir dir("average");
  ExperimentPlan plan;
  plan.problems = {"logistic-synthetic:200x8"};
  plan.methods = {"ours"};
  for (std::uint64_t s = 0; s < 10; ++s) plan.seeds.push_back(s);
  plan.workers = 2;
  plan.solver.schedule_H = "adaptive-hess";
  run_plan(plan, dir.path);
  const auto summaries = load_summaries(dir.path);
  REQUIRE(summaries.size() == 10);
  const auto rows = aggregate(summaries);
  REQUIRE(rows.size() == 1);
  double iters = 0, hess = 0, stat = 0;
  for (const auto& s : summaries) {
    iters += s.iterations;
    hess += s.counters.hessian;
    stat += s.final_stationarity;
  }
  CHECK(rows[0].replications == 10);
  CHECK(std::abs(rows[0].mean_iterations - iters / 10) <= 1e-12);
  CHECK(std::abs(rows[0].mean_hessian_evals - hess / 10) <= 1e-12);
  CHECK(std::abs(rows[0].mean_final_stationarity - stat / 10) <= 1e-12);
  const auto json = nlohmann::json::parse(slurp(dir.path / "aggregate.json"));
  CHECK(json.at(0).at("replications") == 10);
}

TEST_CASE("plan validation") {
  ExperimentPlan plan = small_plan();
  CHECK_NOTHROW(plan.validate());
  plan.methods = {"ours", "ours"};
  CHECK_THROWS_AS(plan.validate(), ConfigError);
  plan = small_plan();
  plan.methods = {"newton"};
  CHECK_THROWS_AS(plan.validate(), ConfigError);
  plan = small_plan();
  plan.budgets.function_evals = 0;
  CHECK_THROWS_AS(plan.validate(), ConfigError);
  plan = small_plan();
  plan.seeds.clear();
  CHECK_THROWS_AS(plan.validate(), ConfigError);
  plan = small_plan();
  plan.problems = {"no-such-problem"};
  ScratchDir dir("unknown");
  CHECK_THROWS_AS(run_plan(plan, dir.path), ConfigError);
}

TEST_CASE("plan and solver settings parse from INI text") {
  const ExperimentPlan plan = plan_from_ini(
      "[plan]\n"
      "problems = maratos, hs040\n"
      "methods = ours,soc\n"
      "replications = 3\n"
      "workers = 2\n"
      "[budgets]\n"
      "iterations = 50\n"
      "function_evals = 100\n"
      "hessian_evals = 50\n"
      "[solver]\n"
      "eta = 1e-3\n"
      "linear_solver = minres\n"
      "schedule_H = adaptive-hess\n");
  CHECK(plan.problems == std::vector<std::string>{"maratos", "hs040"});
  CHECK(plan.methods == std::vector<std::string>{"ours", "soc"});
  CHECK(plan.seeds == std::vector<std::uint64_t>{0, 1, 2});
  CHECK(plan.workers == 2);
  CHECK(plan.budgets.iterations == 50);
  CHECK(plan.budgets.function_evals == 100);
  CHECK(plan.solver.eta == 1e-3);
  CHECK(plan.solver.linear_solver == LinearSolverKind::minres);
  CHECK(plan.solver.schedule_H == "adaptive-hess");

  CHECK_THROWS_AS(solver_config_from_ini("[solver]\nmystery = 1\n"), ConfigError);
  CHECK_THROWS_AS(solver_config_from_ini("[solver]\neta = lots\n"), ConfigError);
  CHECK_THROWS_AS(solver_config_from_ini("[solver]\neta = 2\n"), ConfigError);
  CHECK_THROWS_AS(plan_from_ini("[budgets]\niterations = 5\n"), ConfigError);
  CHECK_THROWS_AS(plan_from_ini("[plan]\nproblems = maratos\nmethods = ours\n[budgets]\nhessian_evals = -1\n"),
                  ConfigError);
}

TEST_CASE("describe distinguishes configurations") {
  SolverConfig a, b;
  b.sigma = 0.25;
  CHECK(describe(a) != describe(b));
  CHECK(describe(a) == describe(SolverConfig{}));
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("run_single applies budgets") {
  Budgets b;
  b.iterations = 2;
  const SolveOutcome out = run_single("rosenbrock-circle", "ours", 0, {}, b);
  CHECK(out.iterations == 2);
  CHECK(out.status == SolveStatus::iteration_limit);
  CHECK(out.problem == "rosenbrock-circle");
}

TEST_CASE("cost tables mark failures and floor costs at one") {
  RunSummary a;
  a.method = "ours";
  a.problem = "p";
  a.status = "converged";
  a.iterations = 0;
  RunSummary b = a;
  b.method = "sqp-l1";
  b.status = "iteration_limit";
  b.iterations = 100;
  RunSummary c = a;
  c.problem = "q";
  c.iterations = 7;
  const CostTable t = cost_table({a, b, c}, CostMetric::iterations);
  CHECK(t.methods == std::vector<std::string>{"ours", "sqp-l1"});
  CHECK(t.problems == std::vector<std::string>{"p#0", "q#0"});
  CHECK(t.cost[0][0] == 1.0);
  CHECK(t.cost[0][1] == CostTable::failure);
  CHECK(t.cost[1][0] == 7.0);
  CHECK(t.cost[1][1] == CostTable::failure);
  CHECK(parse_cost_metric("hess") == CostMetric::hessian_evals);
  CHECK_THROWS_AS(parse_cost_metric("time"), ConfigError);
}

}  // TEST_SUITE
