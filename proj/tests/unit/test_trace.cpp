#include <doctest.h>

#include <cmath>
#include <sstream>

#include "msqp/baselines.hpp"
#include "msqp/errors.hpp"
#include "msqp/suite.hpp"
#include "msqp/trace.hpp"

using namespace msqp;

namespace {

bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

}  // namespace

TEST_SUITE("trace") {

TEST_CASE("trace CSV round-trips every field") {
  for (const auto& key : method_keys()) {
    const TestProblem tp = constrained_rosenbrock();
    const SolveOutcome out = run_method(parse_method(key), tp.problem, tp.start, {});
    std::ostringstream text;
    write_trace_csv(text, out);
    std::istringstream in(text.str());
    const auto rows = read_trace_csv(in);
    REQUIRE(rows.size() == out.trace.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const IterationRecord& a = out.trace[i];
      const IterationRecord& b = rows[i];
      CHECK(a.k == b.k);
      CHECK(a.x == b.x);
      CHECK(a.y == b.y);
      CHECK(a.d == b.d);
      CHECK(a.delta == b.delta);
      CHECK(a.correction == b.correction);
      CHECK(a.branch == b.branch);
      CHECK(a.backtracks == b.backtracks);
      CHECK(a.anchor == b.anchor);
      CHECK(a.size_H == b.size_H);
      for (auto field : {&IterationRecord::d_norm, &IterationRecord::gamma, &IterationRecord::tau,
                         &IterationRecord::tau_trial, &IterationRecord::alpha,
                         &IterationRecord::phi, &IterationRecord::delta_l, &IterationRecord::lhs,
                         &IterationRecord::rhs, &IterationRecord::penalty,
                         &IterationRecord::dHd, &IterationRecord::eps_A})
        CHECK(same(a.*field, b.*field));
      CHECK(a.evaluations.function == b.evaluations.function);
    }
    SolveOutcome copy = out;
    copy.trace = rows;
    std::ostringstream again;
    write_trace_csv(again, copy);
    CHECK(again.str() == text.str());
  }
}

TEST_CASE("header follows the fixed column order") {
  const SolveOutcome empty;
  std::ostringstream text;
  write_trace_csv(text, empty);
  std::string expected;
  for (const auto& c : trace_columns()) expected += (expected.empty() ? "" : ",") + c;
  CHECK(text.str() == expected + "\n");
  CHECK(trace_columns().front() == "method");
}

TEST_CASE("malformed traces raise parse errors with line numbers") {
  std::istringstream wrong_header("a,b,c\n");
  CHECK_THROWS_AS(read_trace_csv(wrong_header), ParseError);

  const TestProblem tp = maratos_counterexample();
  const SolveOutcome out = solve(tp.problem, tp.start, {});
  std::ostringstream text;
  write_trace_csv(text, out);
  std::string s = text.str();
  s += "ours,maratos,7,not-a-number\n";
  std::istringstream in(s);
  try {
    read_trace_csv(in);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == out.trace.size() + 2);
  }
}

TEST_CASE("summary JSON round-trips and maps non-finite values to null") {
  const TestProblem tp = maratos_counterexample();
  const SolveOutcome out = solve(tp.problem, tp.start, {});
  const RunSummary s = summarize(out, 17);
  CHECK(s.seed == 17);
  CHECK(s.status == "converged");
  CHECK(s.iterations == out.iterations);
  CHECK(s.modified_fraction > 0);
  const RunSummary back = summary_from_json(to_json(s));
  CHECK(back.method == s.method);
  CHECK(back.problem == s.problem);
  CHECK(back.seed == 17);
  CHECK(back.iterations == s.iterations);
  CHECK(back.final_objective == s.final_objective);
  CHECK(back.counters.function == s.counters.function);
  CHECK(back.unit_step_fraction == s.unit_step_fraction);

  RunSummary odd = s;
  odd.final_tau = INFINITY;
  odd.final_gamma = NAN;
  const std::string json = to_json(odd);
  CHECK(json.find("null") != std::string::npos);
  const RunSummary parsed = summary_from_json(json);
  CHECK(std::isnan(parsed.final_gamma));
  CHECK_THROWS_AS(summary_from_json("{not json"), ParseError);
}

}  // TEST_SUITE
