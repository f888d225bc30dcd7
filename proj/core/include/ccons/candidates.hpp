#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ccons/topology.hpp"

namespace ccons {

/// A cluster that may be activated in one time slot. Node indices are
/// zero-based; `members` is sorted ascending and contains `head`.
struct ClusterCandidate {
  std::size_t head = 0;
  std::vector<std::size_t> members;

  std::size_t size() const noexcept { return members.size(); }
  bool contains(std::size_t node) const;

  friend bool operator==(const ClusterCandidate&, const ClusterCandidate&) = default;
};

/// Dense symmetric averaging matrix. Used both for a single cluster and for
/// the probability-weighted mixture of clusters.
using WeightMatrix = Eigen::MatrixXd;

/// For every head and every size s in [size_min, size_max], the cluster made
/// of the head plus its s-1 nearest neighbours by squared distance. Distance
/// ties go to the lower node index. Candidates sharing a member set but not
/// a head are all kept; see prune_dominated.
///
/// Throws ConfigError unless 2 <= size_min <= size_max <= topology.size().
std::vector<ClusterCandidate> enumerate_candidates(const Topology& topology,
                                                   std::size_t size_min,
                                                   std::size_t size_max);

/// W[j][k] = 1/|C| for j, k in C; W[j][j] = 1 for j outside C; 0 otherwise.
WeightMatrix build_weight_matrix(const ClusterCandidate& candidate, std::size_t n);

/// Among candidates with identical member sets keeps a single one of minimal
/// L1 cost (lower head index on ties). Survivors keep their input order.
/// Throws InvalidArgument when the cost count does not match.
std::vector<ClusterCandidate> prune_dominated(std::span<const ClusterCandidate> candidates,
                                              std::span<const double> l1_costs);

}  // namespace ccons
