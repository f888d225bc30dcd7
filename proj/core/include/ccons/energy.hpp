#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ccons/candidates.hpp"
#include "ccons/topology.hpp"

namespace ccons {

/// First-order radio model. The defaults make the energy of a transmission
/// numerically equal to the squared distance.
struct EnergyParams {
  double eps_amp = 1.0;  ///< amplifier energy per bit per length^2
  double e_elec = 0.0;   ///< circuitry energy per bit, charged on tx and rx
  double k_bits = 1.0;   ///< message length in bits

  /// Throws ConfigError naming the first negative or non-finite field.
  void validate() const;
};

/// Per-node energy, zero outside the cluster.
using CostVector = Eigen::VectorXd;

/// k*E_elec + eps_amp*k*d^2 + k*E_elec. Throws InvalidArgument on negative input.
double transmission_energy(const EnergyParams& params, double d_sq);

/// Step 1 cost: each non-head member transmits to the head.
CostVector cost_fc(const ClusterCandidate& candidate, const Topology& topology,
                   const EnergyParams& params);

/// Step 2 cost: the head broadcasts over its largest squared distance to a member.
CostVector cost_bc(const ClusterCandidate& candidate, const Topology& topology,
                   const EnergyParams& params);

/// ||cost_fc + cost_bc||_1, the energy spent by one activation of the cluster.
double candidate_cost_l1(const ClusterCandidate& candidate, const Topology& topology,
                         const EnergyParams& params);

std::vector<double> candidate_costs_l1(std::span<const ClusterCandidate> candidates,
                                       const Topology& topology, const EnergyParams& params);

/// c(p) = sum_i p_i (cost_fc_i + cost_bc_i). Throws InvalidArgument when
/// p.size() != candidates.size().
CostVector expected_cost(const Eigen::VectorXd& p, std::span<const ClusterCandidate> candidates,
                         const Topology& topology, const EnergyParams& params);

}  // namespace ccons
