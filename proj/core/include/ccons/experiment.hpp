#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "ccons/candidates.hpp"
#include "ccons/config.hpp"
#include "ccons/optimizer.hpp"
#include "ccons/simulator.hpp"
#include "ccons/topology.hpp"

namespace ccons {

enum class ExitStatus : int {
  kSuccess = 0,
  kConfigError = 1,
  kInfeasible = 2,
  kIoError = 3,
};

/// The pruned candidate pool shared by every alpha of a sweep.
struct CandidatePool {
  Topology topology;
  std::size_t enumerated = 0;  ///< count before pruning
  std::vector<ClusterCandidate> candidates;
  std::vector<double> l1_costs;
};

CandidatePool build_candidate_pool(const ExperimentConfig& config);

struct AlphaResult {
  double alpha = 0.0;
  OptimizeResult optimization;
  std::optional<AveragedTrace> trace;  ///< present only when feasible
};

struct SweepResult {
  CandidatePool pool;
  std::vector<AlphaResult> results;

  bool all_feasible() const;
};

/// Optimizes and simulates every alpha of the config. No file output.
SweepResult run_experiment(const ExperimentConfig& config);

/// run_experiment followed by writing trace_alpha=<a>.csv per feasible alpha
/// and summary.json into config.output_dir. Progress goes to `log`.
/// Returns kInfeasible if any alpha was infeasible; throws IoError on write
/// failures.
ExitStatus run_sweep(const ExperimentConfig& config, std::ostream& log);

}  // namespace ccons
