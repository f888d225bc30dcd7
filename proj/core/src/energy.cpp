#include "ccons/energy.hpp"

#include <cmath>

#include "ccons/errors.hpp"

namespace ccons {

namespace {

void require_non_negative(double value, const char* key) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw ConfigError(key, "must be a finite non-negative number");
  }
}

}  // namespace

void EnergyParams::validate() const {
  require_non_negative(eps_amp, "eps_amp");
  require_non_negative(e_elec, "e_elec");
  require_non_negative(k_bits, "k_bits");
}

double transmission_energy(const EnergyParams& params, double d_sq) {
  if (d_sq < 0.0 || params.eps_amp < 0.0 || params.e_elec < 0.0 || params.k_bits < 0.0) {
    throw InvalidArgument("transmission_energy: inputs must be non-negative");
  }
  const double k = params.k_bits;
  return k * params.e_elec + params.eps_amp * k * d_sq + k * params.e_elec;
}

CostVector cost_fc(const ClusterCandidate& candidate, const Topology& topology,
                   const EnergyParams& params) {
  CostVector c = CostVector::Zero(Eigen::Index(topology.size()));
  for (std::size_t m : candidate.members) {
    if (m == candidate.head) continue;  // the head receives, it does not transmit
    c(Eigen::Index(m)) = transmission_energy(params, topology.d_sq(candidate.head, m));
  }
  return c;
}

CostVector cost_bc(const ClusterCandidate& candidate, const Topology& topology,
                   const EnergyParams& params) {
  double reach = 0.0;
  for (std::size_t m : candidate.members) reach = std::max(reach, topology.d_sq(candidate.head, m));
  CostVector c = CostVector::Zero(Eigen::Index(topology.size()));
  c(Eigen::Index(candidate.head)) = transmission_energy(params, reach);
  return c;
}

double candidate_cost_l1(const ClusterCandidate& candidate, const Topology& topology,
                         const EnergyParams& params) {
  return (cost_fc(candidate, topology, params) + cost_bc(candidate, topology, params))
      .lpNorm<1>();
}

std::vector<double> candidate_costs_l1(std::span<const ClusterCandidate> candidates,
                                       const Topology& topology, const EnergyParams& params) {
  std::vector<double> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) out.push_back(candidate_cost_l1(c, topology, params));
  return out;
}

CostVector expected_cost(const Eigen::VectorXd& p, std::span<const ClusterCandidate> candidates,
                         const Topology& topology, const EnergyParams& params) {
  if (static_cast<std::size_t>(p.size()) != candidates.size()) {
    throw InvalidArgument("expected_cost: p has " + std::to_string(p.size()) +
                          " entries for " + std::to_string(candidates.size()) + " candidates");
  }
  CostVector c = CostVector::Zero(Eigen::Index(topology.size()));
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double w = p(Eigen::Index(i));
    if (w == 0.0) continue;
    c += w * (cost_fc(candidates[i], topology, params) + cost_bc(candidates[i], topology, params));
  }
  return c;
}

}  // namespace ccons
