#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "ccons/candidates.hpp"

namespace ccons {

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;  ///< unit norm
};

/// Algebraically largest eigenvalue of a symmetric matrix with a unit
/// eigenvector whose residual ||Av - lambda v|| is at most `tol`.
/// Throws InvalidArgument if the input is empty, not square, or asymmetric
/// by more than 1e-9.
EigenPair symmetric_top_eigenpair(const Eigen::MatrixXd& matrix, double tol = 1e-9);

/// W(p) = sum_i p_i W_i over the candidates' averaging matrices.
/// Throws InvalidArgument on size mismatch or an empty candidate list.
WeightMatrix mixing_matrix(const Eigen::VectorXd& p, std::span<const ClusterCandidate> candidates,
                           std::size_t n);

/// Second-largest eigenvalue of W(p), evaluated as lambda_max(W(p) - J) with
/// J = 11^T / n.
double xi(const Eigen::VectorXd& p, std::span<const ClusterCandidate> candidates, std::size_t n);

/// v^T W_i v for each candidate, computed from the member set directly.
double quadratic_form(const ClusterCandidate& candidate, const Eigen::VectorXd& v);

/// g_i = v^T W_i v + alpha * l1_costs[i], v the top eigenvector of W(p) - J.
/// A valid subgradient of xi(p) + alpha * ||c(p)||_1 for any multiplicity.
Eigen::VectorXd objective_subgradient(const Eigen::VectorXd& p,
                                      std::span<const ClusterCandidate> candidates,
                                      std::size_t n, std::span<const double> l1_costs,
                                      double alpha);

/// Euclidean projection onto the probability simplex.
Eigen::VectorXd project_simplex(const Eigen::VectorXd& v);

}  // namespace ccons
