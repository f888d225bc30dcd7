#include "ccons/topology.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ccons/errors.hpp"
#include "ccons/rng.hpp"

namespace ccons {

Eigen::MatrixXd squared_distance_matrix(std::span<const Point> positions) {
  if (positions.size() < 2) {
    throw InvalidArgument("squared_distance_matrix: need at least two positions");
  }
  const auto n = static_cast<Eigen::Index>(positions.size());
  Eigen::MatrixXd d_sq = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double dx = positions[i].x - positions[j].x;
      const double dy = positions[i].y - positions[j].y;
      const double v = dx * dx + dy * dy;
      d_sq(i, j) = v;
      d_sq(j, i) = v;
    }
  }
  return d_sq;
}

Topology::Topology(std::vector<Point> positions) : positions_(std::move(positions)) {
  if (positions_.size() < 2) throw InvalidArgument("topology needs at least two nodes");
  for (const auto& p : positions_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw InvalidArgument("topology coordinates must be finite");
    }
  }
  d_sq_ = squared_distance_matrix(positions_);
}

Topology Topology::generate(std::size_t n, double side, std::uint64_t seed) {
  if (n < 2) throw ConfigError("n_nodes", "must be at least 2");
  if (!(side > 0.0) || !std::isfinite(side)) throw ConfigError("area_side", "must be positive");
  Rng rng = make_rng(seed);
  std::vector<Point> positions(n);
  for (auto& p : positions) {
    p.x = uniform(rng, 0.0, side);
    p.y = uniform(rng, 0.0, side);
  }
  return Topology(std::move(positions));
}

Topology Topology::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open topology file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(buffer.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("topology_file", path.string() + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("positions") || !doc["positions"].is_array()) {
    throw ConfigError("positions", "expected an array of [x, y] pairs in " + path.string());
  }
  std::vector<Point> positions;
  for (const auto& entry : doc["positions"]) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number()) {
      throw ConfigError("positions", "every entry must be a numeric [x, y] pair");
    }
    positions.push_back({entry[0].get<double>(), entry[1].get<double>()});
  }
  if (positions.size() < 2) throw ConfigError("positions", "need at least two nodes");
  return Topology(std::move(positions));
}

}  // namespace ccons
