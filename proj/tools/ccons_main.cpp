// ccons: energy-regularized clustered consensus experiments.
//
//   ccons run        --config cfg.json [--output-dir DIR] [--seed N]
//   ccons validate   --config cfg.json
//   ccons candidates --config cfg.json
//
// Exit codes: 0 success, 1 configuration error, 2 infeasible, 3 I/O error.

#include <cstdint>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ccons/config.hpp"
#include "ccons/errors.hpp"
#include "ccons/experiment.hpp"
#include "ccons/report.hpp"

namespace {

int code(ccons::ExitStatus status) { return static_cast<int>(status); }

void print_candidates(const ccons::CandidatePool& pool) {
  std::cout << "nodes " << pool.topology.size() << ", enumerated " << pool.enumerated
            << ", kept " << pool.candidates.size() << "\n";
  std::cout << std::setw(6) << "index" << std::setw(6) << "head" << std::setw(6) << "size"
            << std::setw(24) << "cost_l1" << "  members\n";
  for (std::size_t i = 0; i < pool.candidates.size(); ++i) {
    const auto& c = pool.candidates[i];
    std::cout << std::setw(6) << i << std::setw(6) << c.head << std::setw(6) << c.size()
              << std::setw(24) << ccons::format_double(pool.l1_costs[i]) << "  ";
    for (std::size_t k = 0; k < c.members.size(); ++k) {
      std::cout << (k ? "," : "") << c.members[k];
    }
    std::cout << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-regularized clustered average consensus"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  std::optional<std::uint64_t> seed;

  auto* run = app.add_subcommand("run", "Optimize and simulate every alpha in the config");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--output-dir", output_dir, "Overrides output_dir");
  run->add_option("--seed", seed, "Overrides sim_base_seed");

  auto* validate = app.add_subcommand("validate", "Parse and check a config");
  validate->add_option("--config", config_path, "Experiment config (JSON)")->required();

  auto* candidates = app.add_subcommand("candidates", "Print the pruned candidate clusters");
  candidates->add_option("--config", config_path, "Experiment config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : code(ccons::ExitStatus::kConfigError);
  }

  try {
    ccons::ExperimentConfig config = ccons::load_config(config_path);
    if (!output_dir.empty()) config.output_dir = output_dir;
    if (seed) config.sim_base_seed = *seed;

    if (validate->parsed()) {
      std::cout << "config ok: " << config.alphas.size() << " alpha value(s)\n";
      return code(ccons::ExitStatus::kSuccess);
    }
    if (candidates->parsed()) {
      print_candidates(ccons::build_candidate_pool(config));
      return code(ccons::ExitStatus::kSuccess);
    }
    const auto status = ccons::run_sweep(config, std::cout);
    if (status == ccons::ExitStatus::kInfeasible) {
      std::cerr << "error: at least one alpha is infeasible (xi > 1 - epsilon)\n";
    }
    return code(status);
  } catch (const ccons::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return code(ccons::ExitStatus::kConfigError);
  } catch (const ccons::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return code(ccons::ExitStatus::kIoError);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return code(ccons::ExitStatus::kConfigError);
  }
}
