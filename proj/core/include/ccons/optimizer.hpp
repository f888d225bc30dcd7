#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "ccons/candidates.hpp"
#include "ccons/topology.hpp"

namespace ccons {

enum class SolverMethod {
  /// Log-barrier path following on the epigraph form
  /// min s + alpha c^T p  s.t.  s I - Q^T W(p) Q > 0, p in the simplex, s < 1 - epsilon.
  kBarrier,
  /// Projected subgradient with diminishing steps. Steps along the xi
  /// subgradient while xi > 1 - epsilon, along the objective otherwise.
  kProjectedSubgradient,
};

struct OptimizerOptions {
  double alpha = 0.0;     ///< weight of the expected-energy term
  double epsilon = 1e-2;  ///< feasibility requires xi <= 1 - epsilon
  SolverMethod method = SolverMethod::kBarrier;

  // kBarrier
  double gap_tol = 1e-9;  ///< stop once the duality gap bound m/t falls below this

  // kProjectedSubgradient
  int max_iters = 5000;     ///< iterations per stage
  double step_scale = 1.0;  ///< step a_t = step_scale / sqrt(t)
  double tol = 1e-6;        ///< stall threshold on the best objective
  int stall_window = 500;   ///< iterations without `tol` improvement before a stage stops
  int refine_stages = 0;    ///< restarts from the best iterate with step_scale / 10^k

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

struct ActivationDistribution {
  Eigen::VectorXd p;
  double xi = 1.0;
  double expected_cost_l1 = 0.0;
  double objective = 0.0;
};

struct OptimizeResult {
  /// False when the best xi found exceeds 1 - epsilon; `best` then carries
  /// the best iterate for reporting only.
  bool feasible = false;
  ActivationDistribution best;
  int iterations = 0;  ///< Newton steps or subgradient steps
};

/// Evaluates xi, expected cost and objective at `p`.
ActivationDistribution evaluate_distribution(const Eigen::VectorXd& p,
                                             std::span<const ClusterCandidate> candidates,
                                             std::size_t n, std::span<const double> l1_costs,
                                             double alpha);

/// Minimizes xi(p) + alpha * ||c(p)||_1 over the probability simplex subject
/// to xi(p) <= 1 - epsilon. Both methods start from the uniform distribution
/// and are deterministic. Entries below 1e-6 in the result are zeroed and the
/// vector renormalized.
///
/// Throws InvalidArgument for an empty candidate list or a cost/candidate
/// size mismatch, ConfigError for invalid options, NumericalError if the
/// objective becomes non-finite.
OptimizeResult optimize(std::span<const ClusterCandidate> candidates,
                        std::span<const double> l1_costs, const Topology& topology,
                        const OptimizerOptions& options);

}  // namespace ccons
