#include "msqp/sampling.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "msqp/errors.hpp"

namespace msqp {

namespace {

int clamp_size(double value, int N) {
  if (!(value >= 1)) return 1;
  if (value >= N) return N;
  return static_cast<int>(value);
}

double parse_number(std::string_view text, const std::string& key) {
  double value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError("malformed number in schedule '" + key + "'");
  return value;
}

}  // namespace

int SampleSchedule::size(int k) const {
  if (k < 0) throw std::out_of_range("negative iteration");
  switch (kind_) {
    case ScheduleKind::full:
      return N_;
    case ScheduleKind::constant_fraction:
      return clamp_size(std::ceil(parameter_ * N_), N_);
    case ScheduleKind::geometric_gap: {
      long long gap = N_ - initial_;
      for (int i = 0; i < k && gap > 0; ++i)
        gap = static_cast<long long>(std::floor(parameter_ * static_cast<double>(gap)));
      return N_ - static_cast<int>(gap);
    }
    case ScheduleKind::adaptive_hessian: {
      const double frac = 1 - std::pow(0.95, (k + 2) / 2.0);
      return clamp_size(std::floor(frac * N_), N_);
    }
  }
  return N_;
}

std::string SampleSchedule::key() const {
  switch (kind_) {
    case ScheduleKind::full: return "full";
    case ScheduleKind::constant_fraction: return "frac:" + std::to_string(parameter_);
    case ScheduleKind::geometric_gap:
      return "geo:" + std::to_string(parameter_) + ":" + std::to_string(initial_);
    case ScheduleKind::adaptive_hessian: return "adaptive-hess";
  }
  return "full";
}

SampleSchedule build_schedule(ScheduleKind kind, double parameter, int N,
                              int horizon, int initial_size, int min_size) {
  if (N < 1) throw ConfigError("schedule population must be positive");
  if (horizon < 0) throw ConfigError("schedule horizon must be nonnegative");
  SampleSchedule s;
  s.kind_ = kind;
  s.N_ = N;
  s.parameter_ = parameter;
  switch (kind) {
    case ScheduleKind::full:
      break;
    case ScheduleKind::constant_fraction:
      if (!(parameter > 0 && parameter <= 1))
        throw ConfigError("fraction must lie in (0, 1]");
      break;
    case ScheduleKind::geometric_gap:
      if (!(parameter > 0 && parameter < 1))
        throw ConfigError("geometric gap rate must lie in (0, 1)");
      s.initial_ = initial_size > 0
                       ? initial_size
                       : clamp_size(std::ceil(0.05 * N), N);
      if (s.initial_ > N) throw ConfigError("initial sample size exceeds N");
      break;
    case ScheduleKind::adaptive_hessian:
      break;
  }

  const int floor_size = std::max(1, min_size);
  const bool growing = kind == ScheduleKind::geometric_gap ||
                       kind == ScheduleKind::adaptive_hessian;
  double gap_sum = 0;
  for (int k = 0; k <= horizon; ++k) {
    const int size = s.size(k);
    if (size < 1 || size > N)
      throw ConfigError("schedule size outside [1, N] at k=" + std::to_string(k));
    if (size < floor_size)
      throw ConfigError("schedule violates the minimum size floor at k=" +
                        std::to_string(k));
    if (growing && k > 0 && size < s.size(k - 1))
      throw ConfigError("schedule is not monotone at k=" + std::to_string(k));
    if (kind == ScheduleKind::geometric_gap) {
      const double gap = N - size;
      if (k > 0) {
        const double prev_gap = N - s.size(k - 1);
        if (gap > parameter * prev_gap)
          throw ConfigError("gap contraction violated at k=" + std::to_string(k));
      }
      gap_sum += gap / N;
    }
  }
  if (kind == ScheduleKind::geometric_gap) {
    const double bound =
        static_cast<double>(N - s.initial_) / (N * (1 - parameter));
    if (gap_sum > bound * (1 + 1e-12))
      throw ConfigError("partial sums of the sampling gap are not summable");
  }
  return s;
}

SampleSchedule parse_schedule(const std::string& key, int N, int horizon) {
  if (key == "full") return build_schedule(ScheduleKind::full, 1, N, horizon);
  if (key == "adaptive-hess")
    return build_schedule(ScheduleKind::adaptive_hessian, 0, N, horizon);
  if (key.rfind("frac:", 0) == 0)
    return build_schedule(ScheduleKind::constant_fraction,
                          parse_number(std::string_view(key).substr(5), key), N,
                          horizon);
  if (key.rfind("geo:", 0) == 0) {
    std::string_view rest = std::string_view(key).substr(4);
    int initial = 0;
    const auto colon = rest.find(':');
    if (colon != std::string_view::npos) {
      const double s0 = parse_number(rest.substr(colon + 1), key);
      if (s0 != std::floor(s0) || s0 < 1)
        throw ConfigError("initial size in '" + key + "' must be a positive integer");
      initial = static_cast<int>(s0);
      rest = rest.substr(0, colon);
    }
    return build_schedule(ScheduleKind::geometric_gap, parse_number(rest, key),
                          N, horizon, initial);
  }
  throw ConfigError("unknown sample schedule '" + key + "'");
}

std::vector<int> draw_samples(int N, int size, std::uint64_t seed, int iteration,
                              int stream) {
  if (N < 1 || size < 1 || size > N)
    throw std::out_of_range("sample size must lie in [1, N]");
  std::vector<int> idx(N);
  std::iota(idx.begin(), idx.end(), 0);
  if (size == N) return idx;

  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(iteration),
                    static_cast<std::uint32_t>(stream)};
  std::mt19937_64 rng(seq);
  for (int i = 0; i < size; ++i) {
    std::uniform_int_distribution<int> pick(i, N - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(size);
  std::sort(idx.begin(), idx.end());
  return idx;
}

SubsampledEstimates subsampled_estimates(Oracle& oracle, const Vector& x,
                                         std::span<const int> S_f,
                                         std::span<const int> S_g,
                                         std::span<const int> S_H) {
  if (S_f.empty() || S_g.empty() || S_H.empty())
    throw std::invalid_argument("sample sets must be nonempty");
  return {oracle.sample_f(x, S_f), oracle.sample_g(x, S_g),
          oracle.sample_H(x, S_H)};
}

BoundConstants estimate_bound_constants(const FiniteSumProblem& problem,
                                        const Vector& x, int probe,
                                        std::uint64_t seed) {
  const int N = problem.num_components();
  const std::vector<int> idx =
      probe > 0 && probe < N ? draw_samples(N, probe, seed, 0, 99)
                             : draw_samples(N, N, seed, 0);
  BoundConstants out;
  out.source = BoundConstants::Source::estimated;
  for (int i : idx) {
    out.kf_bound = std::max(out.kf_bound, std::abs(problem.component_objective(x, i)));
    out.kg_bound = std::max(out.kg_bound, problem.component_gradient(x, i).norm());
    out.kh_bound = std::max(out.kh_bound, problem.component_hessian_norm(x, i));
  }
  return out;
}

ErrorBounds error_bounds(int N, int size_f, int size_g, int size_H,
                         const BoundConstants& constants) {
  auto check = [N](int s) {
    if (s < 1 || s > N) throw std::out_of_range("sample size outside [1, N]");
    return 2.0 * static_cast<double>(N - s) / N;
  };
  return {check(size_f) * constants.kf_bound, check(size_g) * constants.kg_bound,
          check(size_H) * constants.kh_bound};
}

}  // namespace msqp
