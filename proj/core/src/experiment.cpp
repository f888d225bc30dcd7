#include "ccons/experiment.hpp"

#include <algorithm>
#include <ostream>
#include <system_error>

#include "ccons/energy.hpp"
#include "ccons/errors.hpp"
#include "ccons/report.hpp"

namespace ccons {

namespace {

Topology make_topology(const ExperimentConfig& config) {
  if (config.topology_file) return Topology::load(*config.topology_file);
  return Topology::generate(config.n_nodes, config.area_side, config.topology_seed);
}

}  // namespace

CandidatePool build_candidate_pool(const ExperimentConfig& config) {
  Topology topology = make_topology(config);
  const std::size_t size_max = config.cluster_size_max.value_or(topology.size());
  const auto all = enumerate_candidates(topology, config.cluster_size_min, size_max);
  const auto all_costs = candidate_costs_l1(all, topology, config.energy);
  auto kept = prune_dominated(all, all_costs);
  auto kept_costs = candidate_costs_l1(kept, topology, config.energy);
  return CandidatePool{std::move(topology), all.size(), std::move(kept), std::move(kept_costs)};
}

bool SweepResult::all_feasible() const {
  return std::all_of(results.begin(), results.end(),
                     [](const AlphaResult& r) { return r.optimization.feasible; });
}

SweepResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  SweepResult sweep{build_candidate_pool(config), {}};
  const CandidatePool& pool = sweep.pool;

  for (double alpha : config.alphas) {
    OptimizerOptions options;
    options.alpha = alpha;
    options.epsilon = config.epsilon;
    options.max_iters = config.optimizer_max_iters;
    options.step_scale = config.optimizer_step_scale;
    options.tol = config.optimizer_tol;

    AlphaResult result;
    result.alpha = alpha;
    result.optimization = optimize(pool.candidates, pool.l1_costs, pool.topology, options);
    if (result.optimization.feasible) {
      Scenario scenario;
      scenario.candidates = pool.candidates;
      scenario.l1_costs = pool.l1_costs;
      scenario.p = result.optimization.best.p;
      scenario.n = pool.topology.size();
      scenario.init_low = config.init_low;
      scenario.init_high = config.init_high;
      scenario.threshold = config.error_threshold;
      scenario.max_iters = config.max_iterations;
      result.trace = monte_carlo(scenario, config.runs, config.sim_base_seed);
    }
    sweep.results.push_back(std::move(result));
  }
  return sweep;
}

ExitStatus run_sweep(const ExperimentConfig& config, std::ostream& log) {
  const SweepResult sweep = run_experiment(config);
  log << "nodes: " << sweep.pool.topology.size() << ", candidates: " << sweep.pool.enumerated
      << " enumerated, " << sweep.pool.candidates.size() << " after pruning\n";

  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) {
    throw IoError("cannot create output directory " + config.output_dir.string() + ": " +
                  ec.message());
  }

  for (const AlphaResult& r : sweep.results) {
    const auto& best = r.optimization.best;
    log << "alpha=" << format_double(r.alpha) << ": ";
    if (!r.optimization.feasible) {
      log << "infeasible (best xi=" << format_double(best.xi) << ")\n";
      continue;
    }
    log << "xi=" << format_double(best.xi)
        << " expected_cost_l1=" << format_double(best.expected_cost_l1);
    if (r.trace->mean_iterations_to_threshold) {
      log << " iterations=" << format_double(*r.trace->mean_iterations_to_threshold)
          << " energy=" << format_double(*r.trace->mean_energy_at_threshold);
    }
    log << '\n';
    write_trace_csv(*r.trace, r.alpha, config.output_dir / trace_file_name(r.alpha));
  }
  write_summary_json(sweep.results, sweep.pool.candidates, config.output_dir / "summary.json");
  return sweep.all_feasible() ? ExitStatus::kSuccess : ExitStatus::kInfeasible;
}

}  // namespace ccons
