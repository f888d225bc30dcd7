#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ccons/energy.hpp"

namespace ccons {

/// One experiment: topology, candidate sizes, the alpha sweep and the
/// Monte-Carlo protocol. Defaults reproduce the 30-node reference setup.
struct ExperimentConfig {
  std::size_t n_nodes = 30;
  double area_side = 50.0;
  std::uint64_t topology_seed = 7;
  std::optional<std::filesystem::path> topology_file;
  std::size_t cluster_size_min = 2;
  std::optional<std::size_t> cluster_size_max;  ///< defaults to n_nodes
  std::vector<double> alphas{0.0};
  double epsilon = 1e-2;
  std::size_t runs = 1000;
  double error_threshold = 0.1;
  std::size_t max_iterations = 10000;
  std::uint64_t sim_base_seed = 1;
  EnergyParams energy;
  double init_low = 0.0;
  double init_high = 30.0;
  std::filesystem::path output_dir = "out";
  int optimizer_max_iters = 5000;
  double optimizer_step_scale = 1.0;
  double optimizer_tol = 1e-6;

  std::size_t size_max() const { return cluster_size_max.value_or(n_nodes); }

  /// Throws ConfigError naming the offending key.
  void validate() const;
};

/// Parses a JSON object with the keys of ExperimentConfig. Unknown keys are
/// rejected. Relative `topology_file` paths resolve against `base_dir`.
ExperimentConfig parse_config(const std::string& json_text,
                              const std::filesystem::path& base_dir = {});

/// Throws ConfigError if the file is missing, malformed or invalid.
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace ccons
