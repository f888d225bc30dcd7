#include "ccons/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include "ccons/errors.hpp"
#include "ccons/spectral.hpp"

namespace ccons {

namespace {

constexpr double kSupportFloor = 1e-6;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Iterate {
  ActivationDistribution dist;
  Eigen::VectorXd xi_gradient;  ///< v^T W_i v
};

Iterate evaluate(const Eigen::VectorXd& p, std::span<const ClusterCandidate> candidates,
                 std::size_t n, std::span<const double> l1_costs, double alpha) {
  WeightMatrix w = mixing_matrix(p, candidates, n);
  w.array() -= 1.0 / static_cast<double>(n);
  const EigenPair top = symmetric_top_eigenpair(w);

  Iterate it;
  it.dist.p = p;
  it.dist.xi = std::clamp(top.value, 0.0, 1.0);
  it.dist.expected_cost_l1 = 0.0;
  it.xi_gradient.resize(p.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto idx = Eigen::Index(i);
    it.dist.expected_cost_l1 += p(idx) * l1_costs[i];
    it.xi_gradient(idx) = quadratic_form(candidates[i], top.vector);
  }
  it.dist.objective = it.dist.xi + alpha * it.dist.expected_cost_l1;
  if (!std::isfinite(it.dist.objective)) {
    throw NumericalError("optimize: objective is not finite");
  }
  return it;
}

Eigen::VectorXd to_vector(std::span<const double> values) {
  return Eigen::Map<const Eigen::VectorXd>(values.data(), Eigen::Index(values.size()));
}

// ---------------------------------------------------------------------------
// Log-barrier method on the epigraph problem.
//
// Working in an orthonormal basis Q of the complement of 1 removes the fixed
// eigenpair (1, 1) of every W(p); lambda_max(Q^T W(p) Q) is then exactly xi.

class EpigraphBarrier {
 public:
  struct Point {
    Eigen::VectorXd p;
    double s = 0.0;
  };

  EpigraphBarrier(std::span<const ClusterCandidate> candidates, std::size_t n,
                  const Eigen::VectorXd& linear_cost)
      : dim_(Eigen::Index(n) - 1), linear_(linear_cost) {
    const auto full = Eigen::Index(n);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Eigen::MatrixXd::Ones(full, 1));
    const Eigen::MatrixXd q_full = qr.householderQ() * Eigen::MatrixXd::Identity(full, full);
    const Eigen::MatrixXd q = q_full.rightCols(dim_);
    blocks_.reserve(candidates.size());
    for (const auto& c : candidates) {
      blocks_.push_back(q.transpose() * build_weight_matrix(c, n) * q);
    }
  }

  /// Restricted top eigenvalue, i.e. xi(p).
  double lambda_max(const Eigen::VectorXd& p) const {
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(combine(p), Eigen::EigenvaluesOnly)
        .eigenvalues()(dim_ - 1);
  }

  /// Minimizes s + linear^T p along the central path. `s_max` adds the bound
  /// s < s_max; `stop_below` ends the path early once a centred point has
  /// s below it. Returns the last centred point.
  Point solve(Point x, std::optional<double> s_max, double gap_tol,
              std::optional<double> stop_below, int& newton_steps) const {
    const double m = double(blocks_.size()) + double(dim_) + (s_max ? 1.0 : 0.0);
    for (double t = 1.0;; t *= kMu) {
      center(x, t, s_max, newton_steps);
      if (stop_below && x.s < *stop_below) break;
      if (m / t < gap_tol) break;
    }
    return x;
  }

 private:
  static constexpr double kMu = 10.0;
  static constexpr int kMaxNewton = 200;

  Eigen::MatrixXd combine(const Eigen::VectorXd& p) const {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim_, dim_);
    for (std::size_t i = 0; i < blocks_.size(); ++i) a += p(Eigen::Index(i)) * blocks_[i];
    return a;
  }

  // +inf outside the domain.
  double barrier(const Point& x, double t, std::optional<double> s_max) const {
    if ((x.p.array() <= 0.0).any()) return kInf;
    if (s_max && x.s >= *s_max) return kInf;
    Eigen::MatrixXd slack = -combine(x.p);
    slack.diagonal().array() += x.s;
    Eigen::LLT<Eigen::MatrixXd> llt(slack);
    if (llt.info() != Eigen::Success) return kInf;
    const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    if (!std::isfinite(log_det)) return kInf;
    double value = t * (x.s + linear_.dot(x.p)) - log_det - x.p.array().log().sum();
    if (s_max) value -= std::log(*s_max - x.s);
    return value;
  }

  void center(Point& x, double t, std::optional<double> s_max, int& newton_steps) const {
    const auto count = Eigen::Index(blocks_.size());
    const Eigen::Index vars = count + 1;  // p then s
    double value = barrier(x, t, s_max);

    for (int step = 0; step < kMaxNewton; ++step) {
      Eigen::MatrixXd slack = -combine(x.p);
      slack.diagonal().array() += x.s;
      Eigen::LLT<Eigen::MatrixXd> llt(slack);
      if (llt.info() != Eigen::Success) {
        throw NumericalError("optimize: barrier iterate left the semidefinite cone");
      }
      // S^-1 = L^-T L^-1; B_i = L^-1 A_i L^-T; G = L^-1 L^-T.
      const Eigen::MatrixXd l_inv =
          llt.matrixL().solve(Eigen::MatrixXd::Identity(dim_, dim_));
      const Eigen::MatrixXd g_mat = l_inv * l_inv.transpose();
      Eigen::MatrixXd b_cols(dim_ * dim_, count);
      for (Eigen::Index i = 0; i < count; ++i) {
        Eigen::Map<Eigen::MatrixXd>(b_cols.col(i).data(), dim_, dim_) =
            l_inv * blocks_[std::size_t(i)] * l_inv.transpose();
      }
      const Eigen::Map<const Eigen::VectorXd> g_vec(g_mat.data(), dim_ * dim_);

      Eigen::VectorXd grad(vars);
      Eigen::MatrixXd hess(vars, vars);
      hess.topLeftCorner(count, count).noalias() = b_cols.transpose() * b_cols;
      hess.topLeftCorner(count, count).diagonal().array() += x.p.array().square().inverse();
      hess.topRightCorner(count, 1).noalias() = -(b_cols.transpose() * g_vec);
      hess.bottomLeftCorner(1, count) = hess.topRightCorner(count, 1).transpose();
      hess(count, count) = g_vec.squaredNorm();
      for (Eigen::Index i = 0; i < count; ++i) {
        // tr(B_i) from the diagonal stride of the column-major block.
        double trace = 0.0;
        for (Eigen::Index k = 0; k < dim_; ++k) trace += b_cols(k * dim_ + k, i);
        grad(i) = t * linear_(i) + trace - 1.0 / x.p(i);
      }
      grad(count) = t - g_mat.trace();
      if (s_max) {
        const double gap = *s_max - x.s;
        grad(count) += 1.0 / gap;
        hess(count, count) += 1.0 / (gap * gap);
      }

      // Newton step under sum(p) = 1 by block elimination. The 1/p^2 terms
      // span many decades near the boundary, so solve with Jacobi scaling.
      Eigen::VectorXd a = Eigen::VectorXd::Ones(vars);
      a(count) = 0.0;
      const Eigen::VectorXd scale = hess.diagonal().cwiseSqrt().cwiseInverse();
      Eigen::MatrixXd scaled = scale.asDiagonal() * hess * scale.asDiagonal();
      Eigen::LLT<Eigen::MatrixXd> factor(scaled);
      for (double shift = 1e-14; factor.info() != Eigen::Success; shift *= 100.0) {
        if (shift > 1e-4) throw NumericalError("optimize: singular Newton system");
        scaled.diagonal().array() += shift;
        factor.compute(scaled);
      }
      const Eigen::VectorXd h_grad = scale.asDiagonal() * factor.solve(scale.asDiagonal() * grad);
      const Eigen::VectorXd h_a = scale.asDiagonal() * factor.solve(scale.asDiagonal() * a);
      const double nu = -a.dot(h_grad) / a.dot(h_a);
      const Eigen::VectorXd dx = -(h_grad + nu * h_a);
      const double decrement = -grad.dot(dx);
      ++newton_steps;
      if (!(decrement > 2e-12)) return;

      double tau = 1.0;
      Point trial;
      double trial_value = kInf;
      for (; tau > 1e-14; tau *= 0.5) {
        trial.p = x.p + tau * dx.head(count);
        trial.s = x.s + tau * dx(count);
        trial_value = barrier(trial, t, s_max);
        if (trial_value <= value - 0.25 * tau * decrement) break;
      }
      if (!(trial_value < value)) return;  // no progress at machine precision
      x = std::move(trial);
      value = trial_value;
    }
  }

  Eigen::Index dim_;
  Eigen::VectorXd linear_;
  std::vector<Eigen::MatrixXd> blocks_;
};

Eigen::VectorXd clean_support(const Eigen::VectorXd& p) {
  Eigen::VectorXd out = (p.array() < kSupportFloor).select(0.0, p);
  return out / out.sum();
}

OptimizeResult finish(const Eigen::VectorXd& raw, std::span<const ClusterCandidate> candidates,
                      std::size_t n, std::span<const double> l1_costs,
                      const OptimizerOptions& options, int iterations) {
  const double bound = 1.0 - options.epsilon;
  OptimizeResult result;
  result.iterations = iterations;
  result.best = evaluate(clean_support(raw), candidates, n, l1_costs, options.alpha).dist;
  result.feasible = result.best.xi <= bound;
  if (!result.feasible) {
    // Zeroing tiny entries can nudge an active constraint over the bound.
    auto unclean = evaluate(raw, candidates, n, l1_costs, options.alpha).dist;
    if (unclean.xi <= bound) {
      result.best = std::move(unclean);
      result.feasible = true;
    }
  }
  return result;
}

OptimizeResult optimize_barrier(std::span<const ClusterCandidate> candidates,
                                std::span<const double> l1_costs, std::size_t n,
                                const OptimizerOptions& options) {
  const auto count = Eigen::Index(candidates.size());
  const double bound = 1.0 - options.epsilon;
  const Eigen::VectorXd uniform = Eigen::VectorXd::Constant(count, 1.0 / double(count));
  int steps = 0;

  // Phase I: find a point strictly inside xi < 1 - epsilon by minimizing xi.
  const EpigraphBarrier xi_only(candidates, n, Eigen::VectorXd::Zero(count));
  Eigen::VectorXd start = uniform;
  double start_xi = xi_only.lambda_max(start);
  if (start_xi >= bound - 0.5 * options.epsilon) {
    EpigraphBarrier::Point x{uniform, start_xi + 0.1};
    x = xi_only.solve(x, std::nullopt, options.gap_tol, bound - options.epsilon, steps);
    start = x.p;
    start_xi = xi_only.lambda_max(start);
    if (!(start_xi < bound)) return finish(start, candidates, n, l1_costs, options, steps);
    // Pull back toward uniform while keeping a margin below the bound.
    for (double theta = 0.5; theta > 1e-6; theta *= 0.5) {
      const Eigen::VectorXd mixed = (1.0 - theta) * x.p + theta * uniform;
      const double mixed_xi = xi_only.lambda_max(mixed);
      if (mixed_xi < bound - 0.5 * (bound - start_xi)) {
        start = mixed;
        start_xi = mixed_xi;
        break;
      }
    }
  }

  // Phase II: the regularized problem with the bound on s.
  const EpigraphBarrier regularized(candidates, n, options.alpha * to_vector(l1_costs));
  EpigraphBarrier::Point x{start, 0.5 * (std::max(start_xi, 0.0) + bound)};
  x = regularized.solve(x, bound, options.gap_tol, std::nullopt, steps);

  // Dropping sub-floor entries can push an active bound over; re-solve with
  // a tighter bound so the cleaned vector stays feasible.
  double target = bound;
  for (int retry = 0; retry < 6; ++retry) {
    const double cleaned_xi = xi_only.lambda_max(clean_support(x.p));
    if (cleaned_xi <= bound) break;
    target -= 2.0 * (cleaned_xi - bound) + 1e-12;
    if (!(start_xi < target)) break;
    EpigraphBarrier::Point y{start, 0.5 * (std::max(start_xi, 0.0) + target)};
    y = regularized.solve(y, target, options.gap_tol, std::nullopt, steps);
    x = std::move(y);
  }
  return finish(x.p, candidates, n, l1_costs, options, steps);
}

// ---------------------------------------------------------------------------

OptimizeResult optimize_subgradient(std::span<const ClusterCandidate> candidates,
                                    std::span<const double> l1_costs, std::size_t n,
                                    const OptimizerOptions& options) {
  const auto count = Eigen::Index(candidates.size());
  const double bound = 1.0 - options.epsilon;
  const Eigen::VectorXd cost = options.alpha * to_vector(l1_costs);

  Iterate current = evaluate(Eigen::VectorXd::Constant(count, 1.0 / double(count)), candidates,
                             n, l1_costs, options.alpha);
  // Best feasible iterate by objective; until one exists, the lowest xi.
  Iterate best = current;
  bool have_feasible = current.dist.xi <= bound;
  auto better = [&](const Iterate& it) {
    const bool feasible = it.dist.xi <= bound;
    if (feasible != have_feasible) return feasible;
    return feasible ? it.dist.objective < best.dist.objective : it.dist.xi < best.dist.xi;
  };

  int iterations = 0;
  double scale = options.step_scale;
  for (int stage = 0; stage <= options.refine_stages; ++stage, scale /= 10.0) {
    current = best;
    double window_best = have_feasible ? best.dist.objective : best.dist.xi;
    int window_start = 0;
    for (int t = 1; t <= options.max_iters; ++t) {
      ++iterations;
      const bool violated = current.dist.xi > bound;
      const Eigen::VectorXd g = violated ? current.xi_gradient : current.xi_gradient + cost;
      const double step = scale / std::sqrt(double(t));
      current = evaluate(project_simplex(current.dist.p - step * g), candidates, n, l1_costs,
                         options.alpha);
      if (better(current)) {
        best = current;
        have_feasible = best.dist.xi <= bound;
      }

      const double score = have_feasible ? best.dist.objective : best.dist.xi;
      if (window_best - score >= options.tol) {
        window_best = score;
        window_start = t;
      } else if (t - window_start >= options.stall_window) {
        break;
      }
    }
  }
  return finish(best.dist.p, candidates, n, l1_costs, options, iterations);
}

}  // namespace

void OptimizerOptions::validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha", "must be >= 0");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon", "must lie in (0, 1)");
  if (!(gap_tol > 0.0)) throw ConfigError("gap_tol", "must be positive");
  if (max_iters < 1) throw ConfigError("max_iters", "must be >= 1");
  if (!(step_scale > 0.0) || !std::isfinite(step_scale)) {
    throw ConfigError("step_scale", "must be positive");
  }
  if (!(tol >= 0.0)) throw ConfigError("tol", "must be >= 0");
  if (stall_window < 1) throw ConfigError("stall_window", "must be >= 1");
  if (refine_stages < 0) throw ConfigError("refine_stages", "must be >= 0");
}

ActivationDistribution evaluate_distribution(const Eigen::VectorXd& p,
                                             std::span<const ClusterCandidate> candidates,
                                             std::size_t n, std::span<const double> l1_costs,
                                             double alpha) {
  if (l1_costs.size() != candidates.size()) {
    throw InvalidArgument("evaluate_distribution: one cost per candidate required");
  }
  return evaluate(p, candidates, n, l1_costs, alpha).dist;
}

OptimizeResult optimize(std::span<const ClusterCandidate> candidates,
                        std::span<const double> l1_costs, const Topology& topology,
                        const OptimizerOptions& options) {
  options.validate();
  if (candidates.empty()) throw InvalidArgument("optimize: no candidates");
  if (l1_costs.size() != candidates.size()) {
    throw InvalidArgument("optimize: one cost per candidate required");
  }
  for (double c : l1_costs) {
    if (!std::isfinite(c)) throw NumericalError("optimize: candidate cost is not finite");
  }
  switch (options.method) {
    case SolverMethod::kBarrier:
      return optimize_barrier(candidates, l1_costs, topology.size(), options);
    case SolverMethod::kProjectedSubgradient:
      return optimize_subgradient(candidates, l1_costs, topology.size(), options);
  }
  throw InvalidArgument("optimize: unknown solver method");
}

}  // namespace ccons
