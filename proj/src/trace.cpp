#include "msqp/trace.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "msqp/errors.hpp"
#include "msqp/profiles.hpp"

namespace msqp {

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const Vector& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ';';
    s += fmt(v[i]);
  }
  return s;
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

double parse_double(const std::string& s, int line) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(line, "bad number '" + s + "'");
  return v;
}

int parse_int(const std::string& s, int line) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(line, "bad integer '" + s + "'");
  return v;
}

Vector parse_vector(const std::string& s, int line) {
  std::vector<double> values;
  if (!s.empty()) {
    std::size_t start = 0;
    while (true) {
      const auto end = s.find(';', start);
      values.push_back(parse_double(s.substr(start, end - start), line));
      if (end == std::string::npos) break;
      start = end + 1;
    }
  }
  return Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace

const std::vector<std::string>& trace_columns() {
  static const std::vector<std::string> columns = {
      "method", "problem", "k", "d_norm", "gamma", "tau", "tau_trial", "alpha",
      "branch", "backtracks", "feasibility", "stationarity", "f", "c_l1", "phi",
      "delta_l", "dWd", "dHd", "sum_abs_dCid", "eps_A", "lhs", "rhs", "size_f",
      "size_g", "size_H", "evals_function", "evals_gradient", "evals_hessian",
      "evals_constraint", "evals_jacobian", "evals_constraint_hessian",
      "regularization", "minres_iterations", "penalty", "anchor", "x", "y", "d",
      "delta", "correction"};
  return columns;
}

void write_trace_csv(std::ostream& out, const SolveOutcome& outcome) {
  const auto& cols = trace_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const IterationRecord& r : outcome.trace) {
    const OracleCounters& e = r.evaluations;
    const std::vector<std::string> row = {
        quote(outcome.method), quote(outcome.problem), std::to_string(r.k),
        fmt(r.d_norm), fmt(r.gamma), fmt(r.tau), fmt(r.tau_trial), fmt(r.alpha),
        to_string(r.branch), std::to_string(r.backtracks), fmt(r.feasibility),
        fmt(r.stationarity), fmt(r.f), fmt(r.c_l1), fmt(r.phi), fmt(r.delta_l),
        fmt(r.dWd), fmt(r.dHd), fmt(r.sum_abs_dCid), fmt(r.eps_A), fmt(r.lhs),
        fmt(r.rhs), std::to_string(r.size_f), std::to_string(r.size_g),
        std::to_string(r.size_H), fmt(e.function), fmt(e.gradient),
        fmt(e.hessian), fmt(e.constraint), fmt(e.jacobian),
        fmt(e.constraint_hessian), fmt(r.regularization),
        std::to_string(r.minres_iterations), fmt(r.penalty),
        std::to_string(r.anchor), fmt(r.x), fmt(r.y), fmt(r.d), fmt(r.delta),
        fmt(r.correction)};
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

std::vector<IterationRecord> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(0, "empty trace");
  if (split_csv(line) != trace_columns())
    throw ParseError(1, "trace header does not match the expected columns");
  std::vector<IterationRecord> records;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != trace_columns().size())
      throw ParseError(lineno, "wrong number of fields");
    IterationRecord r;
    std::size_t i = 2;
    auto num = [&] { return parse_double(f[i++], lineno); };
    auto integer = [&] { return parse_int(f[i++], lineno); };
    auto vec = [&] { return parse_vector(f[i++], lineno); };
    r.k = integer();
    r.d_norm = num();
    r.gamma = num();
    r.tau = num();
    r.tau_trial = num();
    r.alpha = num();
    const auto branch = parse_branch(f[i++]);
    if (!branch) throw ParseError(lineno, "unknown branch");
    r.branch = *branch;
    r.backtracks = integer();
    r.feasibility = num();
    r.stationarity = num();
    r.f = num();
    r.c_l1 = num();
    r.phi = num();
    r.delta_l = num();
    r.dWd = num();
    r.dHd = num();
    r.sum_abs_dCid = num();
    r.eps_A = num();
    r.lhs = num();
    r.rhs = num();
    r.size_f = integer();
    r.size_g = integer();
    r.size_H = integer();
    r.evaluations.function = num();
    r.evaluations.gradient = num();
    r.evaluations.hessian = num();
    r.evaluations.constraint = num();
    r.evaluations.jacobian = num();
    r.evaluations.constraint_hessian = num();
    r.regularization = num();
    r.minres_iterations = integer();
    r.penalty = num();
    r.anchor = integer();
    r.x = vec();
    r.y = vec();
    r.d = vec();
    r.delta = vec();
    r.correction = vec();
    records.push_back(std::move(r));
  }
  return records;
}

RunSummary summarize(const SolveOutcome& outcome, std::uint64_t seed) {
  RunSummary s;
  s.method = outcome.method;
  s.problem = outcome.problem;
  s.seed = seed;
  s.status = to_string(outcome.status);
  s.message = outcome.message;
  s.iterations = outcome.iterations;
  s.final_objective = outcome.final_objective;
  s.final_stationarity = outcome.final_stationarity;
  s.final_feasibility = outcome.final_feasibility;
  s.counters = outcome.counters;
  s.minres_iterations = outcome.minres_iterations;
  s.seconds = outcome.seconds;
  if (!outcome.trace.empty()) {
    const BranchStatistics b = branch_statistics(outcome.trace);
    s.unit_step_fraction = b.unit_step_fraction;
    s.modified_fraction = b.modified_fraction;
    s.final_tau = b.final_tau;
    s.final_gamma = b.final_gamma;
  }
  return s;
}

namespace {

// JSON has no NaN/∞; those are stored as null.
nlohmann::json number(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

double number(const nlohmann::json& j) {
  return j.is_null() ? std::nan("") : j.get<double>();
}

}  // namespace

std::string to_json(const RunSummary& s) {
  nlohmann::json j;
  j["method"] = s.method;
  j["problem"] = s.problem;
  j["seed"] = s.seed;
  j["status"] = s.status;
  j["message"] = s.message;
  j["iterations"] = s.iterations;
  j["final_objective"] = number(s.final_objective);
  j["final_stationarity"] = number(s.final_stationarity);
  j["final_feasibility"] = number(s.final_feasibility);
  j["counters"] = {{"function", s.counters.function},
                   {"gradient", s.counters.gradient},
                   {"hessian", s.counters.hessian},
                   {"constraint", s.counters.constraint},
                   {"jacobian", s.counters.jacobian},
                   {"constraint_hessian", s.counters.constraint_hessian}};
  j["minres_iterations"] = s.minres_iterations;
  j["seconds"] = s.seconds;
  j["unit_step_fraction"] = number(s.unit_step_fraction);
  j["modified_fraction"] = number(s.modified_fraction);
  j["final_tau"] = number(s.final_tau);
  j["final_gamma"] = number(s.final_gamma);
  return j.dump(2);
}

RunSummary summary_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    RunSummary s;
    s.method = j.at("method").get<std::string>();
    s.problem = j.at("problem").get<std::string>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.status = j.at("status").get<std::string>();
    s.message = j.value("message", "");
    s.iterations = j.at("iterations").get<int>();
    s.final_objective = number(j.at("final_objective"));
    s.final_stationarity = number(j.at("final_stationarity"));
    s.final_feasibility = number(j.at("final_feasibility"));
    const auto& c = j.at("counters");
    s.counters.function = c.at("function").get<double>();
    s.counters.gradient = c.at("gradient").get<double>();
    s.counters.hessian = c.at("hessian").get<double>();
    s.counters.constraint = c.at("constraint").get<double>();
    s.counters.jacobian = c.at("jacobian").get<double>();
    s.counters.constraint_hessian = c.at("constraint_hessian").get<double>();
    s.minres_iterations = j.at("minres_iterations").get<int>();
    s.seconds = j.at("seconds").get<double>();
    s.unit_step_fraction = number(j.at("unit_step_fraction"));
    s.modified_fraction = number(j.at("modified_fraction"));
    s.final_tau = number(j.at("final_tau"));
    s.final_gamma = number(j.at("final_gamma"));
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("summary JSON: ") + e.what());
  }
}

}  // namespace msqp
