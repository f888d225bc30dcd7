#include "ccons/candidates.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

#include "ccons/errors.hpp"

namespace ccons {

bool ClusterCandidate::contains(std::size_t node) const {
  return std::binary_search(members.begin(), members.end(), node);
}

std::vector<ClusterCandidate> enumerate_candidates(const Topology& topology,
                                                   std::size_t size_min,
                                                   std::size_t size_max) {
  const std::size_t n = topology.size();
  if (size_min < 2) throw ConfigError("cluster_size_min", "must be at least 2");
  if (size_max > n) {
    throw ConfigError("cluster_size_max", "must not exceed the node count " + std::to_string(n));
  }
  if (size_min > size_max) {
    throw ConfigError("cluster_size_min", "must not exceed cluster_size_max");
  }

  std::vector<ClusterCandidate> out;
  out.reserve(n * (size_max - size_min + 1));
  std::vector<std::size_t> order;
  for (std::size_t head = 0; head < n; ++head) {
    // Other nodes, nearest first. Stable sort keeps lower indices first on ties.
    order.resize(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::erase(order, head);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return topology.d_sq(head, a) < topology.d_sq(head, b);
    });
    for (std::size_t s = size_min; s <= size_max; ++s) {
      ClusterCandidate c;
      c.head = head;
      c.members.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(s - 1));
      c.members.push_back(head);
      std::sort(c.members.begin(), c.members.end());
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
    }
  }
  return out;
}

WeightMatrix build_weight_matrix(const ClusterCandidate& candidate, std::size_t n) {
  const auto dim = static_cast<Eigen::Index>(n);
  WeightMatrix w = WeightMatrix::Identity(dim, dim);
  const double share = 1.0 / static_cast<double>(candidate.size());
  for (std::size_t j : candidate.members) {
    if (j >= n) throw InvalidArgument("candidate member index out of range");
    for (std::size_t k : candidate.members) {
      w(Eigen::Index(j), Eigen::Index(k)) = share;
    }
  }
  return w;
}

std::vector<ClusterCandidate> prune_dominated(std::span<const ClusterCandidate> candidates,
                                              std::span<const double> l1_costs) {
  if (candidates.size() != l1_costs.size()) {
    throw InvalidArgument("prune_dominated: one cost per candidate required");
  }
  // member set -> index of the current cheapest candidate
  std::map<std::vector<std::size_t>, std::size_t> best;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto [it, inserted] = best.try_emplace(candidates[i].members, i);
    if (inserted) continue;
    const std::size_t j = it->second;
    const bool cheaper = l1_costs[i] < l1_costs[j];
    const bool tie_lower_head =
        l1_costs[i] == l1_costs[j] && candidates[i].head < candidates[j].head;
    if (cheaper || tie_lower_head) it->second = i;
  }

  std::vector<bool> keep(candidates.size(), false);
  for (const auto& [members, index] : best) keep[index] = true;

  std::vector<ClusterCandidate> out;
  out.reserve(best.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (keep[i]) out.push_back(candidates[i]);
  }
  return out;
}

}  // namespace ccons
