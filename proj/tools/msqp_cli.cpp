// Command-line front end: single solves, experiment plans, performance
// profiles and derivative audits.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "msqp/baselines.hpp"
#include "msqp/errors.hpp"
#include "msqp/harness.hpp"
#include "msqp/profiles.hpp"
#include "msqp/suite.hpp"
#include "msqp/trace.hpp"

namespace fs = std::filesystem;
using namespace msqp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRunFailure = 1;
constexpr int kExitConfig = 2;

fs::path default_out_dir() {
  if (const char* env = std::getenv("MSQP_OUT_DIR"); env && *env) return env;
  return "msqp_out";
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

int cmd_solve(const std::string& problem, const std::string& method,
              std::uint64_t seed, const std::string& config_path,
              const std::string& out_dir) {
  const SolverConfig config =
      config_path.empty() ? SolverConfig{} : load_solver_config(config_path);
  Budgets budgets;
  budgets.iterations = config.max_iterations;
  budgets.function_evals = config.function_eval_budget;
  budgets.hessian_evals = config.hessian_eval_budget;
  const SolveOutcome out = run_single(problem, method, seed, config, budgets);
  const RunSummary summary = summarize(out, seed);
  const std::string json = to_json(summary);
  std::cout << json << '\n';
  if (!out_dir.empty()) {
    const fs::path dir = out_dir;
    std::ostringstream trace;
    write_trace_csv(trace, out);
    std::string stem = problem + "__" + method + "__s" + std::to_string(seed);
    for (char& ch : stem)
      if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '_')
        ch = '_';
    write_text(dir / (stem + ".trace.csv"), trace.str());
    write_text(dir / (stem + ".summary.json"), json);
  }
  return out.converged() ? kExitOk : kExitRunFailure;
}

int cmd_bench(const std::string& plan_path, const std::string& out_dir,
              int workers) {
  ExperimentPlan plan = load_plan(plan_path);
  if (workers > 0) plan.workers = workers;
  const Manifest manifest = run_plan(plan, out_dir);
  std::size_t failed = 0;
  for (const ManifestEntry& e : manifest.runs) {
    if (e.status != "converged") {
      ++failed;
      std::cerr << e.id << ": " << e.status << '\n';
    }
  }
  std::cout << manifest.runs.size() << " runs, " << manifest.executed
            << " executed, " << manifest.skipped << " reused, " << failed
            << " not converged\n";
  return failed == 0 ? kExitOk : kExitRunFailure;
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

int cmd_profile(const std::string& kind, const std::string& metric,
                const std::string& in_dir, const std::string& out_path) {
  const CostTable table =
      cost_table(load_summaries(in_dir), parse_cost_metric(metric));
  std::ostringstream csv;
  if (kind == "dolan-more") {
    const ProfileTable profile = dolan_more_profile(table);
    for (const auto& p : profile.dropped)
      std::cerr << "warning: every method failed on " << p << "; dropped\n";
    csv << "ratio";
    for (const auto& m : profile.methods) csv << ',' << m;
    csv << '\n';
    for (std::size_t i = 0; i < profile.grid.size(); ++i) {
      csv << format_number(profile.grid[i]);
      for (std::size_t s = 0; s < profile.methods.size(); ++s)
        csv << ',' << format_number(profile.rho[s][i]);
      csv << '\n';
    }
    csv << "inf";
    for (double f : profile.solved_fraction) csv << ',' << format_number(f);
    csv << '\n';
  } else {
    const std::vector<double> values = morales_profile(table);
    csv << "problem,log2_ratio_" << table.methods.at(0) << "_vs_"
        << table.methods.at(1) << '\n';
    for (std::size_t p = 0; p < values.size(); ++p)
      csv << table.problems[p] << ',' << format_number(values[p]) << '\n';
  }
  write_text(out_path, csv.str());
  return kExitOk;
}

int cmd_check(const std::string& key, std::uint64_t seed, double tolerance) {
  const TestProblem tp = make_test_problem(key, seed);
  const Problem& problem = *tp.problem;
  Oracle oracle(tp.problem);
  const PrimalDual start = resolve_start(oracle, tp.start);
  check_dimensions(problem, start);

  std::vector<Vector> points{start.x};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int i = 0; i < 5; ++i) {
    Vector p = start.x;
    for (Eigen::Index j = 0; j < p.size(); ++j) p[j] += 0.5 * normal(rng);
    points.push_back(p);
  }

  bool ok = true;
  auto report = [&](const std::string& what, double value, bool pass) {
    std::printf("%-4s %-40s %.3e\n", pass ? "ok" : "FAIL", what.c_str(), value);
    ok = ok && pass;
  };
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vector& x = points[i];
    const std::string where = i == 0 ? "start" : "point " + std::to_string(i);
    const FiniteDifferenceReport fd = finite_difference_check(problem, x, 1e-5);
    report(where + ": gradient vs differences", fd.gradient, fd.gradient <= tolerance);
    report(where + ": Hessian vs differences", fd.hessian, fd.hessian <= tolerance);
    report(where + ": Jacobian vs differences", fd.jacobian, fd.jacobian <= tolerance);
    report(where + ": constraint Hessians vs differences", fd.constraint_hessian,
           fd.constraint_hessian <= tolerance);
    const Matrix H = problem.hessian(x);
    const double asym = (H - H.transpose()).cwiseAbs().maxCoeff();
    report(where + ": Hessian asymmetry", asym,
           asym <= 1e-12 * std::max(1.0, H.cwiseAbs().maxCoeff()));
  }
  if (tp.reference) {
    Oracle ref(tp.problem);
    const double stat = lagrangian_gradient(ref, *tp.reference).lpNorm<Eigen::Infinity>();
    const double feas = ref.c(tp.reference->x).lpNorm<Eigen::Infinity>();
    report("reference point stationarity", stat, stat <= 1e-8);
    report("reference point feasibility", feas, feas <= 1e-8);
  }
  return ok ? kExitOk : kExitRunFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Line-search SQP solver, baselines and experiment harness"};
  app.require_subcommand(1);

  std::string problem, method = "ours", config_path, out_dir, plan_path;
  std::string kind, metric = "iters", in_dir, out_path;
  std::uint64_t seed = 0;
  int workers = 0;
  double tolerance = 1e-5;

  auto* solve = app.add_subcommand("solve", "Solve one problem with one method");
  solve->add_option("--problem", problem, "Problem key")->required();
  solve->add_option("--method", method, "ours, sqp-l1, soc, watchdog or auglag");
  solve->add_option("--seed", seed, "Run seed");
  solve->add_option("--config", config_path, "INI file with a [solver] section");
  solve->add_option("--out", out_dir, "Directory for trace and summary");

  auto* bench = app.add_subcommand("bench", "Run an experiment plan");
  bench->add_option("--plan", plan_path, "Plan INI file")->required();
  bench->add_option("--out", out_dir, "Output directory ($MSQP_OUT_DIR by default)");
  bench->add_option("--workers", workers, "Concurrent runs")->check(CLI::PositiveNumber);

  auto* profile = app.add_subcommand("profile", "Performance profiles from bench output");
  profile->add_option("--kind", kind)
      ->required()
      ->check(CLI::IsMember({"dolan-more", "morales"}));
  profile->add_option("--metric", metric)->check(CLI::IsMember({"iters", "fevals", "hess"}));
  profile->add_option("--in", in_dir, "bench output directory")->required();
  profile->add_option("--out", out_path, "CSV file to write")->required();

  auto* check = app.add_subcommand("check", "Derivative and invariant audit");
  check->add_option("--problem", problem, "Problem key")->required();
  check->add_option("--seed", seed, "Seed for the start and probe points");
  check->add_option("--tolerance", tolerance, "Relative derivative error bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*solve) return cmd_solve(problem, method, seed, config_path, out_dir);
    if (*bench)
      return cmd_bench(plan_path, out_dir.empty() ? default_out_dir() : fs::path(out_dir),
                       workers);
    if (*profile) return cmd_profile(kind, metric, in_dir, out_path);
    if (*check) return cmd_check(problem, seed, tolerance);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRunFailure;
  }
  return kExitOk;
}
