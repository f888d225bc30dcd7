#include "ccons/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>

#include "ccons/errors.hpp"

namespace ccons {

namespace {

constexpr double kSymmetryTolerance = 1e-9;

void check_p(const Eigen::VectorXd& p, std::size_t count, const char* who) {
  if (count == 0) throw InvalidArgument(std::string(who) + ": no candidates");
  if (static_cast<std::size_t>(p.size()) != count) {
    throw InvalidArgument(std::string(who) + ": p has " + std::to_string(p.size()) +
                          " entries for " + std::to_string(count) + " candidates");
  }
}

}  // namespace

EigenPair symmetric_top_eigenpair(const Eigen::MatrixXd& matrix, double tol) {
  if (matrix.rows() == 0 || matrix.rows() != matrix.cols()) {
    throw InvalidArgument("symmetric_top_eigenpair: expected a non-empty square matrix");
  }
  if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance) {
    throw InvalidArgument("symmetric_top_eigenpair: matrix is not symmetric");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("symmetric_top_eigenpair: eigen decomposition failed");
  }
  const Eigen::Index top = matrix.rows() - 1;  // eigenvalues come sorted ascending
  EigenPair out{solver.eigenvalues()(top), solver.eigenvectors().col(top)};
  out.vector.normalize();

  // Fix the sign so results do not depend on solver internals.
  Eigen::Index pivot = 0;
  out.vector.cwiseAbs().maxCoeff(&pivot);
  if (out.vector(pivot) < 0.0) out.vector = -out.vector;

  const double residual = (matrix * out.vector - out.value * out.vector).norm();
  if (!(residual <= std::max(tol, 1e-12 * matrix.norm()))) {
    throw NumericalError("symmetric_top_eigenpair: residual " + std::to_string(residual) +
                         " exceeds tolerance");
  }
  return out;
}

WeightMatrix mixing_matrix(const Eigen::VectorXd& p, std::span<const ClusterCandidate> candidates,
                           std::size_t n) {
  check_p(p, candidates.size(), "mixing_matrix");
  const auto dim = static_cast<Eigen::Index>(n);
  // Start from (sum p) I, then swap each active cluster's identity block for
  // its averaging block.
  WeightMatrix w = WeightMatrix::Identity(dim, dim) * p.sum();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double weight = p(Eigen::Index(i));
    if (weight == 0.0) continue;
    const auto& members = candidates[i].members;
    const double share = weight / static_cast<double>(members.size());
    for (std::size_t j : members) {
      if (j >= n) throw InvalidArgument("mixing_matrix: member index out of range");
      w(Eigen::Index(j), Eigen::Index(j)) -= weight;
      for (std::size_t k : members) w(Eigen::Index(j), Eigen::Index(k)) += share;
    }
  }
  return w;
}

namespace {

EigenPair deflated_top_eigenpair(const Eigen::VectorXd& p,
                                 std::span<const ClusterCandidate> candidates, std::size_t n) {
  WeightMatrix w = mixing_matrix(p, candidates, n);
  w.array() -= 1.0 / static_cast<double>(n);
  return symmetric_top_eigenpair(w);
}

}  // namespace

double xi(const Eigen::VectorXd& p, std::span<const ClusterCandidate> candidates, std::size_t n) {
  return std::clamp(deflated_top_eigenpair(p, candidates, n).value, 0.0, 1.0);
}

double quadratic_form(const ClusterCandidate& candidate, const Eigen::VectorXd& v) {
  // v^T W v = sum over non-members of v_j^2 + (sum over members of v_j)^2 / |C|
  double inside_sum = 0.0;
  double inside_sq = 0.0;
  for (std::size_t j : candidate.members) {
    const double x = v(Eigen::Index(j));
    inside_sum += x;
    inside_sq += x * x;
  }
  return v.squaredNorm() - inside_sq + inside_sum * inside_sum / static_cast<double>(candidate.size());
}

Eigen::VectorXd objective_subgradient(const Eigen::VectorXd& p,
                                      std::span<const ClusterCandidate> candidates,
                                      std::size_t n, std::span<const double> l1_costs,
                                      double alpha) {
  check_p(p, candidates.size(), "objective_subgradient");
  if (l1_costs.size() != candidates.size()) {
    throw InvalidArgument("objective_subgradient: one cost per candidate required");
  }
  const EigenPair top = deflated_top_eigenpair(p, candidates, n);
  Eigen::VectorXd g(p.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    g(Eigen::Index(i)) = quadratic_form(candidates[i], top.vector) + alpha * l1_costs[i];
  }
  return g;
}

Eigen::VectorXd project_simplex(const Eigen::VectorXd& v) {
  const Eigen::Index m = v.size();
  if (m == 0) return v;
  std::vector<double> sorted(v.data(), v.data() + m);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());

  // Largest k with sorted[k-1] - (sum_{j<k} sorted[j] - 1) / k > 0.
  double prefix = 0.0;
  double threshold = 0.0;
  for (Eigen::Index k = 0; k < m; ++k) {
    prefix += sorted[std::size_t(k)];
    const double candidate = (prefix - 1.0) / static_cast<double>(k + 1);
    if (sorted[std::size_t(k)] - candidate > 0.0) threshold = candidate;
  }
  return (v.array() - threshold).cwiseMax(0.0).matrix();
}

}  // namespace ccons
