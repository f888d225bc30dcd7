#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ccons/candidates.hpp"
#include "ccons/rng.hpp"

namespace ccons {

struct NetworkState {
  Eigen::VectorXd y;
  std::size_t t = 0;
};

/// i.i.d. uniform readings on [low, high]. Throws ConfigError if low > high.
NetworkState draw_initial_state(std::size_t n, double low, double high, Rng& rng);

/// Categorical draw: index i with probability p[i]. Zero-probability entries
/// are never returned.
std::size_t sample_cluster(const Eigen::VectorXd& p, Rng& rng);

/// Replaces the members' readings by their arithmetic mean (W_i y).
NetworkState consensus_step(NetworkState state, const ClusterCandidate& candidate);

/// ||y(t) - mean(y(0)) 1||^2 / ||y(0)||^2. Throws UndefinedMetric when y(0) = 0.
double relative_error(const NetworkState& state, const NetworkState& initial);

struct TraceRecord {
  std::size_t t = 0;
  double relative_error = 0.0;
  double cumulative_energy = 0.0;
};

struct SimulationTrace {
  std::vector<TraceRecord> records;  ///< one per slot, starting at t = 0
  std::optional<std::size_t> terminated_at;
  /// Largest |mean(y(t)) - mean(y(0))| seen along the trajectory.
  double max_mean_drift = 0.0;
};

/// Samples a cluster per slot and averages it until the relative error drops
/// below `threshold` or `max_iters` slots have elapsed. Each slot adds the
/// activated cluster's L1 cost to the cumulative energy.
SimulationTrace run_trial(const NetworkState& initial, const Eigen::VectorXd& p,
                          std::span<const ClusterCandidate> candidates,
                          std::span<const double> l1_costs, double threshold,
                          std::size_t max_iters, Rng& rng);

/// Everything a Monte-Carlo batch needs besides the run count and seed.
struct Scenario {
  std::span<const ClusterCandidate> candidates;
  std::span<const double> l1_costs;
  Eigen::VectorXd p;
  std::size_t n = 0;
  double init_low = 0.0;
  double init_high = 30.0;
  double threshold = 0.1;
  std::size_t max_iters = 10000;
};

/// Pointwise means over runs. Shorter runs are right-extended with their
/// final error and energy.
struct AveragedTrace {
  std::vector<double> mean_error;
  std::vector<double> mean_energy;
  std::size_t runs = 0;
  std::size_t terminated_runs = 0;
  /// Means over the runs that crossed the threshold; empty if none did.
  std::optional<double> mean_iterations_to_threshold;
  std::optional<double> mean_energy_at_threshold;
  /// Largest mean drift over every run.
  double max_mean_drift = 0.0;
  /// Whether every realized step kept ||eps(t)|| non-increasing.
  bool error_non_increasing = true;

  std::size_t length() const noexcept { return mean_error.size(); }
};

/// Converts one trace into an averaged trace of a single run.
AveragedTrace average_of(const SimulationTrace& trace);

/// Run r draws its initial state and its cluster sequence from a stream
/// seeded with base_seed + r. Throws InvalidArgument when runs == 0.
AveragedTrace monte_carlo(const Scenario& scenario, std::size_t runs, std::uint64_t base_seed);

/// True iff mean_error[t] <= xi^t * initial_error * (1 + slack) for every
/// recorded t. `initial_error` must be in the trace's units.
bool mse_bound_check(const AveragedTrace& trace, double xi, double initial_error,
                     double slack = 0.10);

}  // namespace ccons
