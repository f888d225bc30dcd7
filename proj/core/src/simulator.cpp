#include "ccons/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "ccons/errors.hpp"

namespace ccons {

namespace {

/// Inverse-CDF sampler over a fixed probability vector.
class ClusterSampler {
 public:
  explicit ClusterSampler(const Eigen::VectorXd& p) : cdf_(std::size_t(p.size())) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      acc += p(i);
      cdf_[std::size_t(i)] = acc;
      if (p(i) > 0.0) last_positive_ = std::size_t(i);
    }
    total_ = acc;
  }

  std::size_t operator()(Rng& rng) const {
    const double u = uniform01(rng) * total_;
    // First index whose cumulative mass exceeds u; zero-mass entries have
    // cdf equal to their predecessor and are skipped by upper_bound.
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) return last_positive_;
    return std::min(std::size_t(it - cdf_.begin()), last_positive_);
  }

 private:
  std::vector<double> cdf_;
  double total_ = 0.0;
  std::size_t last_positive_ = 0;
};

void average_members(Eigen::VectorXd& y, const ClusterCandidate& candidate) {
  double sum = 0.0;
  for (std::size_t j : candidate.members) sum += y(Eigen::Index(j));
  const double mean = sum / static_cast<double>(candidate.size());
  for (std::size_t j : candidate.members) y(Eigen::Index(j)) = mean;
}

// Round-off allowance when checking that a step did not increase the error.
constexpr double kMonotoneSlack = 1e-12;

bool increased(const TraceRecord& before, const TraceRecord& after) {
  return after.relative_error > before.relative_error + kMonotoneSlack;
}

double error_energy(const Eigen::VectorXd& y, double target) {
  return (y.array() - target).square().sum();
}

}  // namespace

NetworkState draw_initial_state(std::size_t n, double low, double high, Rng& rng) {
  if (low > high) throw ConfigError("init_low", "must not exceed init_high");
  NetworkState state;
  state.y.resize(Eigen::Index(n));
  for (Eigen::Index k = 0; k < state.y.size(); ++k) state.y(k) = uniform(rng, low, high);
  return state;
}

std::size_t sample_cluster(const Eigen::VectorXd& p, Rng& rng) {
  if (p.size() == 0) throw InvalidArgument("sample_cluster: empty distribution");
  return ClusterSampler(p)(rng);
}

NetworkState consensus_step(NetworkState state, const ClusterCandidate& candidate) {
  average_members(state.y, candidate);
  ++state.t;
  return state;
}

double relative_error(const NetworkState& state, const NetworkState& initial) {
  const double norm_sq = initial.y.squaredNorm();
  if (norm_sq == 0.0) throw UndefinedMetric("relative_error: initial state is all zero");
  return error_energy(state.y, initial.y.mean()) / norm_sq;
}

SimulationTrace run_trial(const NetworkState& initial, const Eigen::VectorXd& p,
                          std::span<const ClusterCandidate> candidates,
                          std::span<const double> l1_costs, double threshold,
                          std::size_t max_iters, Rng& rng) {
  if (static_cast<std::size_t>(p.size()) != candidates.size() ||
      l1_costs.size() != candidates.size()) {
    throw InvalidArgument("run_trial: p, candidates and costs must have equal length");
  }
  if (!(threshold > 0.0)) throw InvalidArgument("run_trial: threshold must be positive");

  const double norm_sq = initial.y.squaredNorm();
  if (norm_sq == 0.0) throw UndefinedMetric("relative_error: initial state is all zero");
  const double target = initial.y.mean();
  const ClusterSampler sampler(p);

  SimulationTrace trace;
  trace.records.reserve(64);
  Eigen::VectorXd y = initial.y;
  double energy = 0.0;
  double error = error_energy(y, target) / norm_sq;
  trace.records.push_back({0, error, energy});

  for (std::size_t t = 1; error >= threshold && t <= max_iters; ++t) {
    const std::size_t i = sampler(rng);
    average_members(y, candidates[i]);
    energy += l1_costs[i];
    error = error_energy(y, target) / norm_sq;
    trace.max_mean_drift = std::max(trace.max_mean_drift, std::abs(y.mean() - target));
    trace.records.push_back({t, error, energy});
  }
  if (error < threshold) trace.terminated_at = trace.records.back().t;
  return trace;
}

AveragedTrace average_of(const SimulationTrace& trace) {
  AveragedTrace out;
  out.runs = 1;
  for (const auto& r : trace.records) {
    out.mean_error.push_back(r.relative_error);
    out.mean_energy.push_back(r.cumulative_energy);
  }
  for (std::size_t t = 1; t < trace.records.size(); ++t) {
    if (increased(trace.records[t - 1], trace.records[t])) out.error_non_increasing = false;
  }
  out.max_mean_drift = trace.max_mean_drift;
  if (trace.terminated_at) {
    out.terminated_runs = 1;
    out.mean_iterations_to_threshold = double(*trace.terminated_at);
    out.mean_energy_at_threshold = trace.records.back().cumulative_energy;
  }
  return out;
}

AveragedTrace monte_carlo(const Scenario& scenario, std::size_t runs, std::uint64_t base_seed) {
  if (runs == 0) throw InvalidArgument("monte_carlo: runs must be >= 1");

  std::vector<SimulationTrace> traces;
  traces.reserve(runs);
  std::size_t length = 0;
  for (std::size_t r = 0; r < runs; ++r) {
    Rng rng = make_rng(base_seed + r);
    const NetworkState initial =
        draw_initial_state(scenario.n, scenario.init_low, scenario.init_high, rng);
    traces.push_back(run_trial(initial, scenario.p, scenario.candidates, scenario.l1_costs,
                               scenario.threshold, scenario.max_iters, rng));
    length = std::max(length, traces.back().records.size());
  }

  AveragedTrace out;
  out.runs = runs;
  out.mean_error.assign(length, 0.0);
  out.mean_energy.assign(length, 0.0);
  double iterations_sum = 0.0;
  double energy_sum = 0.0;
  for (const auto& trace : traces) {
    const auto& rec = trace.records;
    for (std::size_t t = 0; t < length; ++t) {
      const TraceRecord& r = rec[std::min(t, rec.size() - 1)];
      out.mean_error[t] += r.relative_error;
      out.mean_energy[t] += r.cumulative_energy;
    }
    for (std::size_t t = 1; t < rec.size(); ++t) {
      if (increased(rec[t - 1], rec[t])) out.error_non_increasing = false;
    }
    out.max_mean_drift = std::max(out.max_mean_drift, trace.max_mean_drift);
    if (trace.terminated_at) {
      ++out.terminated_runs;
      iterations_sum += double(*trace.terminated_at);
      energy_sum += rec.back().cumulative_energy;
    }
  }
  for (std::size_t t = 0; t < length; ++t) {
    out.mean_error[t] /= double(runs);
    out.mean_energy[t] /= double(runs);
  }
  if (out.terminated_runs > 0) {
    out.mean_iterations_to_threshold = iterations_sum / double(out.terminated_runs);
    out.mean_energy_at_threshold = energy_sum / double(out.terminated_runs);
  }
  return out;
}

bool mse_bound_check(const AveragedTrace& trace, double xi, double initial_error, double slack) {
  double bound = initial_error * (1.0 + slack);
  for (std::size_t t = 0; t < trace.mean_error.size(); ++t) {
    if (trace.mean_error[t] > bound) return false;
    bound *= xi;
  }
  return true;
}

}  // namespace ccons
