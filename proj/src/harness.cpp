#include "msqp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include "msqp/baselines.hpp"
#include "msqp/errors.hpp"

namespace msqp {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ConfigError("'" + key + "' expects a number, got '" + text + "'");
  return v;
}

long long to_integer(const std::string& key, const std::string& text) {
  const double v = to_double(key, text);
  if (v != std::floor(v)) throw ConfigError("'" + key + "' expects an integer");
  return static_cast<long long>(v);
}

bool to_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError("'" + key + "' expects true or false");
}

pt::ptree parse_ini(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("INI: ") + e.what());
  }
  return tree;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void apply_solver_key(SolverConfig& c, const std::string& key,
                      const std::string& value) {
  auto num = [&] { return to_double(key, value); };
  auto integer = [&] { return static_cast<int>(to_integer(key, value)); };
  auto constants = [&]() -> BoundConstants& {
    if (!c.bound_constants) c.bound_constants = BoundConstants{};
    return *c.bound_constants;
  };
  const std::string v = trim(value);
  if (key == "tau_init") c.tau_init = num();
  else if (key == "eta") c.eta = num();
  else if (key == "nu_alpha") c.nu_alpha = num();
  else if (key == "nu_gamma") c.nu_gamma = num();
  else if (key == "gamma0_factor") c.gamma0_factor = num();
  else if (key == "sigma") c.sigma = num();
  else if (key == "eps_tau") c.eps_tau = num();
  else if (key == "max_iterations") c.max_iterations = integer();
  else if (key == "termination_tol") c.termination_tol = num();
  else if (key == "max_backtracks") c.max_backtracks = integer();
  else if (key == "zeta_min") c.regularization.zeta_min = num();
  else if (key == "lambda0") c.regularization.lambda0 = num();
  else if (key == "lambda_cap") c.regularization.lambda_cap = num();
  else if (key == "linear_solver") {
    if (v == "dense") c.linear_solver = LinearSolverKind::dense;
    else if (v == "minres") c.linear_solver = LinearSolverKind::minres;
    else throw ConfigError("linear_solver must be dense or minres");
  } else if (key == "minres_kappa") c.minres.kappa = num();
  else if (key == "minres_max_iterations") c.minres.max_iterations = integer();
  else if (key == "minres_floor") c.minres.absolute_floor = num();
  else if (key == "hessian_model") {
    if (v == "second-order") c.hessian_model = HessianModel::second_order;
    else if (v == "identity") c.hessian_model = HessianModel::identity;
    else throw ConfigError("hessian_model must be second-order or identity");
  } else if (key == "schedule_f") c.schedule_f = v;
  else if (key == "schedule_g") c.schedule_g = v;
  else if (key == "schedule_H") c.schedule_H = v;
  else if (key == "bound_f") constants().kf_bound = num();
  else if (key == "bound_g") constants().kg_bound = num();
  else if (key == "bound_h") constants().kh_bound = num();
  else if (key == "surrogate_jacobian") c.surrogates.jacobian_pinv_times_constraint = num();
  else if (key == "surrogate_zeta") c.surrogates.zeta = num();
  else if (key == "surrogate_gradient") c.surrogates.gradient_bound = num();
  else if (key == "surrogate_hessian") c.surrogates.hessian_bound = num();
  else if (key == "watchdog_window") c.watchdog_window = integer();
  else if (key == "auglag_penalty_init") c.auglag_penalty_init = num();
  else if (key == "auglag_penalty_cap") c.auglag_penalty_cap = num();
  else if (key == "record_iterates") c.record_iterates = to_bool(key, value);
  else throw ConfigError("unknown solver setting '" + key + "'");
}

SolverConfig solver_from_tree(const pt::ptree& tree) {
  SolverConfig c;
  if (auto section = tree.get_child_optional("solver")) {
    for (const auto& [key, node] : *section) apply_solver_key(c, key, node.data());
  }
  c.validate();
  return c;
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string run_id(const std::string& problem, const std::string& method,
                   std::uint64_t seed) {
  std::string clean;
  for (char ch : problem)
    clean += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '-') ? ch : '_';
  if (clean != problem) clean += "-" + hex(fnv1a64(problem)).substr(0, 8);
  return clean + "__" + method + "__s" + std::to_string(seed);
}

void write_atomically(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

nlohmann::json manifest_json(const std::vector<ManifestEntry>& runs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ManifestEntry& e : runs) {
    if (e.status.empty()) continue;
    arr.push_back({{"id", e.id},
                   {"problem", e.problem},
                   {"method", e.method},
                   {"seed", e.seed},
                   {"config_hash", e.config_hash},
                   {"trace", e.trace_file},
                   {"summary", e.summary_file},
                   {"status", e.status}});
  }
  return {{"runs", arr}};
}

std::string aggregate_json(const std::vector<AggregateRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const AggregateRow& r : rows) {
    arr.push_back({{"problem", r.problem},
                   {"method", r.method},
                   {"replications", r.replications},
                   {"success_fraction", r.success_fraction},
                   {"mean_iterations", r.mean_iterations},
                   {"mean_function_evals", r.mean_function_evals},
                   {"mean_gradient_evals", r.mean_gradient_evals},
                   {"mean_hessian_evals", r.mean_hessian_evals},
                   {"mean_minres_iterations", r.mean_minres_iterations},
                   {"mean_final_stationarity", r.mean_final_stationarity},
                   {"mean_final_feasibility", r.mean_final_feasibility},
                   {"mean_modified_fraction", r.mean_modified_fraction}});
  }
  return arr.dump(2);
}

}  // namespace

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

SolverConfig solver_config_from_ini(const std::string& text) {
  return solver_from_tree(parse_ini(text));
}

SolverConfig load_solver_config(const fs::path& path) {
  return solver_config_from_ini(read_file(path));
}

std::string describe(const SolverConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << "tau_init=" << c.tau_init << "\neta=" << c.eta
      << "\nnu_alpha=" << c.nu_alpha << "\nnu_gamma=" << c.nu_gamma
      << "\ngamma0_factor=" << c.gamma0_factor << "\nsigma=" << c.sigma
      << "\neps_tau=" << c.eps_tau << "\nmax_iterations=" << c.max_iterations
      << "\ntermination_tol=" << c.termination_tol
      << "\nmax_backtracks=" << c.max_backtracks
      << "\nzeta_min=" << c.regularization.zeta_min
      << "\nlambda0=" << c.regularization.lambda0
      << "\nlambda_cap=" << c.regularization.lambda_cap << "\nlinear_solver="
      << (c.linear_solver == LinearSolverKind::dense ? "dense" : "minres")
      << "\nminres_kappa=" << c.minres.kappa
      << "\nminres_max_iterations=" << c.minres.max_iterations
      << "\nminres_floor=" << c.minres.absolute_floor << "\nhessian_model="
      << (c.hessian_model == HessianModel::identity ? "identity" : "second-order")
      << "\nschedule_f=" << c.schedule_f << "\nschedule_g=" << c.schedule_g
      << "\nschedule_H=" << c.schedule_H;
  if (c.bound_constants) {
    out << "\nbound_f=" << c.bound_constants->kf_bound
        << "\nbound_g=" << c.bound_constants->kg_bound
        << "\nbound_h=" << c.bound_constants->kh_bound;
  }
  out << "\nsurrogate_jacobian=" << c.surrogates.jacobian_pinv_times_constraint
      << "\nsurrogate_zeta=" << c.surrogates.zeta
      << "\nsurrogate_gradient=" << c.surrogates.gradient_bound
      << "\nsurrogate_hessian=" << c.surrogates.hessian_bound
      << "\nfunction_eval_budget=" << c.function_eval_budget
      << "\nhessian_eval_budget=" << c.hessian_eval_budget
      << "\nminres_iteration_budget=" << c.minres_iteration_budget
      << "\nwatchdog_window=" << c.watchdog_window
      << "\nauglag_penalty_init=" << c.auglag_penalty_init
      << "\nauglag_penalty_cap=" << c.auglag_penalty_cap
      << "\nrecord_iterates=" << (c.record_iterates ? "true" : "false") << '\n';
  return out.str();
}

void ExperimentPlan::validate() const {
  if (problems.empty()) throw ConfigError("plan lists no problems");
  if (methods.empty()) throw ConfigError("plan lists no methods");
  if (seeds.empty()) throw ConfigError("plan lists no seeds");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (budgets.iterations < 1) throw ConfigError("iteration budget must be >= 1");
  if (!(budgets.function_evals > 0) || !(budgets.hessian_evals > 0) ||
      !(budgets.minres_iters > 0))
    throw ConfigError("budgets must be strictly positive");
  auto unique = [](const auto& v, const char* what) {
    std::set<typename std::decay_t<decltype(v)>::value_type> s(v.begin(), v.end());
    if (s.size() != v.size()) throw ConfigError(std::string("duplicate ") + what);
  };
  unique(problems, "problems");
  unique(methods, "methods");
  unique(seeds, "seeds");
  for (const auto& m : methods) parse_method(m);
  solver.validate();
}

ExperimentPlan plan_from_ini(const std::string& text) {
  const pt::ptree tree = parse_ini(text);
  ExperimentPlan plan;
  const auto plan_section = tree.get_child_optional("plan");
  if (!plan_section) throw ConfigError("plan file has no [plan] section");
  for (const auto& [key, node] : *plan_section) {
    const std::string v = node.data();
    if (key == "problems") plan.problems = split_list(v);
    else if (key == "methods") plan.methods = split_list(v);
    else if (key == "seeds") {
      for (const auto& s : split_list(v))
        plan.seeds.push_back(static_cast<std::uint64_t>(to_integer(key, s)));
    } else if (key == "replications") {
      const long long r = to_integer(key, v);
      if (r < 1) throw ConfigError("replications must be >= 1");
      plan.seeds.clear();
      for (long long s = 0; s < r; ++s) plan.seeds.push_back(static_cast<std::uint64_t>(s));
    } else if (key == "workers") plan.workers = static_cast<int>(to_integer(key, v));
    else throw ConfigError("unknown plan setting '" + key + "'");
  }
  if (plan.seeds.empty()) plan.seeds.push_back(0);
  if (auto b = tree.get_child_optional("budgets")) {
    for (const auto& [key, node] : *b) {
      const std::string v = node.data();
      if (key == "iterations") plan.budgets.iterations = static_cast<int>(to_integer(key, v));
      else if (key == "function_evals") plan.budgets.function_evals = to_double(key, v);
      else if (key == "hessian_evals") plan.budgets.hessian_evals = to_double(key, v);
      else if (key == "minres_iters") plan.budgets.minres_iters = to_double(key, v);
      else throw ConfigError("unknown budget '" + key + "'");
    }
  }
  plan.solver = solver_from_tree(tree);
  plan.validate();
  return plan;
}

ExperimentPlan load_plan(const fs::path& path) {
  return plan_from_ini(read_file(path));
}

bool Manifest::all_converged() const {
  return std::all_of(runs.begin(), runs.end(),
                     [](const ManifestEntry& e) { return e.status == "converged"; });
}

SolveOutcome run_single(const std::string& problem_key, const std::string& method,
                        std::uint64_t seed, const SolverConfig& solver,
                        const Budgets& budgets) {
  const TestProblem tp = make_test_problem(problem_key, seed);
  SolverConfig cfg = solver;
  cfg.seed = seed;
  cfg.max_iterations = budgets.iterations;
  cfg.function_eval_budget = budgets.function_evals;
  cfg.hessian_eval_budget = budgets.hessian_evals;
  if (std::isfinite(budgets.minres_iters)) {
    const auto* fs = dynamic_cast<const FiniteSumProblem*>(tp.problem.get());
    const double N = fs ? fs->num_components() : 1;
    cfg.minres_iteration_budget =
        budgets.minres_iters * N *
        (tp.problem->num_variables() + tp.problem->num_constraints());
  }
  SolveOutcome out = run_method(parse_method(method), tp.problem, tp.start, cfg);
  out.problem = problem_key;
  return out;
}

std::vector<AggregateRow> aggregate(const std::vector<RunSummary>& runs) {
  std::vector<AggregateRow> rows;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  for (const RunSummary& s : runs) {
    const auto key = std::make_pair(s.problem, s.method);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, rows.size()).first;
      rows.push_back(AggregateRow{s.problem, s.method});
    }
    AggregateRow& r = rows[it->second];
    ++r.replications;
    r.success_fraction += s.converged() ? 1 : 0;
    r.mean_iterations += s.iterations;
    r.mean_function_evals += s.counters.function;
    r.mean_gradient_evals += s.counters.gradient;
    r.mean_hessian_evals += s.counters.hessian;
    r.mean_minres_iterations += s.minres_iterations;
    r.mean_final_stationarity += s.final_stationarity;
    r.mean_final_feasibility += s.final_feasibility;
    r.mean_modified_fraction += s.modified_fraction;
  }
  for (AggregateRow& r : rows) {
    const double n = r.replications;
    r.success_fraction /= n;
    r.mean_iterations /= n;
    r.mean_function_evals /= n;
    r.mean_gradient_evals /= n;
    r.mean_hessian_evals /= n;
    r.mean_minres_iterations /= n;
    r.mean_final_stationarity /= n;
    r.mean_final_feasibility /= n;
    r.mean_modified_fraction /= n;
  }
  return rows;
}

Manifest read_manifest(const fs::path& dir) {
  Manifest m;
  const fs::path path = dir / "manifest.json";
  if (!fs::exists(path)) return m;
  try {
    const auto j = nlohmann::json::parse(read_file(path));
    for (const auto& e : j.at("runs")) {
      m.runs.push_back(ManifestEntry{
          e.at("id").get<std::string>(), e.at("problem").get<std::string>(),
          e.at("method").get<std::string>(), e.at("seed").get<std::uint64_t>(),
          e.at("config_hash").get<std::string>(), e.at("trace").get<std::string>(),
          e.at("summary").get<std::string>(), e.at("status").get<std::string>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("manifest: ") + e.what());
  }
  return m;
}

Manifest run_plan(const ExperimentPlan& plan, const fs::path& out_dir) {
  plan.validate();
  fs::create_directories(out_dir);
  // Resolve every problem key up front so a typo fails before any work.
  for (const auto& p : plan.problems) make_test_problem(p, plan.seeds.front());

  std::map<std::string, ManifestEntry> previous;
  for (ManifestEntry& e : read_manifest(out_dir).runs) previous.emplace(e.id, e);

  Manifest manifest;
  std::vector<std::size_t> pending;
  for (const auto& problem : plan.problems) {
    for (const auto& method : plan.methods) {
      for (std::uint64_t seed : plan.seeds) {
        ManifestEntry e;
        e.id = run_id(problem, method, seed);
        e.problem = problem;
        e.method = method;
        e.seed = seed;
        std::ostringstream budgets;
        budgets.precision(17);
        budgets << plan.budgets.iterations << ' ' << plan.budgets.function_evals
                << ' ' << plan.budgets.hessian_evals << ' '
                << plan.budgets.minres_iters;
        e.config_hash = hex(fnv1a64(problem + '\n' + method + '\n' +
                                    std::to_string(seed) + '\n' + budgets.str() +
                                    '\n' + describe(plan.solver)));
        e.trace_file = e.id + ".trace.csv";
        e.summary_file = e.id + ".summary.json";
        const auto it = previous.find(e.id);
        if (it != previous.end() && it->second.config_hash == e.config_hash &&
            fs::exists(out_dir / e.trace_file) &&
            fs::exists(out_dir / e.summary_file)) {
          e.status = it->second.status;
          ++manifest.skipped;
        } else {
          pending.push_back(manifest.runs.size());
        }
        manifest.runs.push_back(std::move(e));
      }
    }
  }

  std::mutex mutex;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= pending.size()) return;
      ManifestEntry entry;
      {
        std::lock_guard lock(mutex);
        if (failure) return;
        entry = manifest.runs[pending[i]];
      }
      try {
        const SolveOutcome out = run_single(entry.problem, entry.method,
                                            entry.seed, plan.solver, plan.budgets);
        std::ostringstream trace;
        write_trace_csv(trace, out);
        write_atomically(out_dir / entry.trace_file, trace.str());
        write_atomically(out_dir / entry.summary_file,
                         to_json(summarize(out, entry.seed)));
        std::lock_guard lock(mutex);
        manifest.runs[pending[i]].status = to_string(out.status);
        ++manifest.executed;
        write_atomically(out_dir / "manifest.json",
                         manifest_json(manifest.runs).dump(2));
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  const int threads =
      std::max(1, std::min<int>(plan.workers, static_cast<int>(pending.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  write_atomically(out_dir / "manifest.json", manifest_json(manifest.runs).dump(2));
  write_atomically(out_dir / "aggregate.json",
                   aggregate_json(aggregate(load_summaries(out_dir))));
  return manifest;
}

std::vector<RunSummary> load_summaries(const fs::path& dir) {
  std::vector<RunSummary> out;
  for (const ManifestEntry& e : read_manifest(dir).runs) {
    RunSummary s = summary_from_json(read_file(dir / e.summary_file));
    s.problem = e.problem;
    out.push_back(std::move(s));
  }
  return out;
}

CostMetric parse_cost_metric(const std::string& key) {
  if (key == "iters") return CostMetric::iterations;
  if (key == "fevals") return CostMetric::function_evals;
  if (key == "hess") return CostMetric::hessian_evals;
  throw ConfigError("metric must be iters, fevals or hess");
}

CostTable cost_table(const std::vector<RunSummary>& runs, CostMetric metric) {
  CostTable t;
  std::map<std::string, std::size_t> method_index, problem_index;
  for (const RunSummary& s : runs) {
    if (method_index.emplace(s.method, t.methods.size()).second)
      t.methods.push_back(s.method);
    const std::string instance = s.problem + "#" + std::to_string(s.seed);
    if (problem_index.emplace(instance, t.problems.size()).second)
      t.problems.push_back(instance);
  }
  t.cost.assign(t.problems.size(),
                std::vector<double>(t.methods.size(), CostTable::failure));
  for (const RunSummary& s : runs) {
    if (!s.converged()) continue;
    double v = 0;
    switch (metric) {
      case CostMetric::iterations: v = s.iterations; break;
      case CostMetric::function_evals: v = s.counters.function; break;
      case CostMetric::hessian_evals: v = s.counters.hessian; break;
    }
    // A run that starts at a solution costs nothing; clamp so ratios exist.
    v = std::max(v, 1.0);
    t.cost[problem_index[s.problem + "#" + std::to_string(s.seed)]]
          [method_index[s.method]] = v;
  }
  return t;
}

}  // namespace msqp
