#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace ccons {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Pairwise squared Euclidean distances. Requires at least two positions.
Eigen::MatrixXd squared_distance_matrix(std::span<const Point> positions);

/// Node placement plus the cached squared-distance matrix every other module
/// reads. Immutable after construction.
class Topology {
 public:
  /// Throws InvalidArgument for fewer than two nodes or non-finite coordinates.
  explicit Topology(std::vector<Point> positions);

  /// `n` points i.i.d. uniform on [0, side]^2, reproducible per seed.
  /// Throws ConfigError when n < 2 or side <= 0.
  static Topology generate(std::size_t n, double side, std::uint64_t seed);

  /// Reads {"positions": [[x, y], ...]}. Throws IoError / ConfigError.
  static Topology load(const std::filesystem::path& path);

  std::size_t size() const noexcept { return positions_.size(); }
  std::span<const Point> positions() const noexcept { return positions_; }
  const Eigen::MatrixXd& squared_distances() const noexcept { return d_sq_; }
  double d_sq(std::size_t i, std::size_t j) const { return d_sq_(Eigen::Index(i), Eigen::Index(j)); }

 private:
  std::vector<Point> positions_;
  Eigen::MatrixXd d_sq_;
};

}  // namespace ccons
