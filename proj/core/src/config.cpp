#include "ccons/config.hpp"

#include <cmath>
#include <limits>
#include <type_traits>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ccons/errors.hpp"

namespace ccons {

namespace {

using nlohmann::json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "n_nodes",         "area_side",       "topology_seed",        "topology_file",
      "cluster_size_min", "cluster_size_max", "alphas",              "epsilon",
      "runs",            "error_threshold", "max_iterations",       "sim_base_seed",
      "eps_amp",         "e_elec",          "k_bits",               "init_low",
      "init_high",       "output_dir",      "optimizer_max_iters",  "optimizer_step_scale",
      "optimizer_tol"};
  return keys;
}

double read_number(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  return v.get<double>();
}

std::uint64_t read_unsigned(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) throw ConfigError(key, "must not be negative");
  throw ConfigError(key, "expected a non-negative integer");
}

std::string read_string(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_string()) throw ConfigError(key, "expected a string");
  return v.get<std::string>();
}

template <typename T>
void assign_if(const json& doc, const std::string& key, T& target) {
  if (!doc.contains(key)) return;
  if constexpr (std::is_same_v<T, double>) {
    target = read_number(doc, key);
  } else if constexpr (std::is_same_v<T, int>) {
    const auto v = read_unsigned(doc, key);
    if (v > std::uint64_t(std::numeric_limits<int>::max())) throw ConfigError(key, "too large");
    target = int(v);
  } else {
    target = static_cast<T>(read_unsigned(doc, key));
  }
}

void require(bool ok, const char* key, const char* message) {
  if (!ok) throw ConfigError(key, message);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!topology_file) {
    require(n_nodes >= 2, "n_nodes", "must be at least 2");
    require(area_side > 0.0 && std::isfinite(area_side), "area_side", "must be positive");
  }
  require(cluster_size_min >= 2, "cluster_size_min", "clusters need at least 2 nodes");
  require(size_max() >= cluster_size_min, "cluster_size_max",
          "must be at least cluster_size_min");
  if (!topology_file) {
    require(size_max() <= n_nodes, "cluster_size_max", "must not exceed n_nodes");
  }
  require(!alphas.empty(), "alphas", "must list at least one value");
  for (double a : alphas) {
    require(a >= 0.0 && std::isfinite(a), "alphas", "values must be finite and >= 0");
  }
  require(epsilon > 0.0 && epsilon < 1.0, "epsilon", "must lie in (0, 1)");
  require(runs >= 1, "runs", "must be at least 1");
  require(error_threshold > 0.0 && std::isfinite(error_threshold), "error_threshold",
          "must be positive");
  require(max_iterations >= 1, "max_iterations", "must be at least 1");
  energy.validate();
  require(std::isfinite(init_low) && std::isfinite(init_high), "init_low", "must be finite");
  require(init_low <= init_high, "init_low", "must not exceed init_high");
  require(init_low != 0.0 || init_high != 0.0, "init_high",
          "an all-zero initial state makes the relative error undefined");
  require(!output_dir.empty(), "output_dir", "must not be empty");
  require(optimizer_max_iters >= 1, "optimizer_max_iters", "must be at least 1");
  require(optimizer_step_scale > 0.0 && std::isfinite(optimizer_step_scale),
          "optimizer_step_scale", "must be positive");
  require(optimizer_tol >= 0.0, "optimizer_tol", "must be >= 0");
}

ExperimentConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("", "config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!known_keys().contains(key)) throw ConfigError(key, "unknown configuration key");
  }

  ExperimentConfig cfg;
  assign_if(doc, "n_nodes", cfg.n_nodes);
  assign_if(doc, "area_side", cfg.area_side);
  assign_if(doc, "topology_seed", cfg.topology_seed);
  if (doc.contains("topology_file")) {
    std::filesystem::path path = read_string(doc, "topology_file");
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    cfg.topology_file = path;
  }
  assign_if(doc, "cluster_size_min", cfg.cluster_size_min);
  if (doc.contains("cluster_size_max")) {
    cfg.cluster_size_max = static_cast<std::size_t>(read_unsigned(doc, "cluster_size_max"));
  }
  if (doc.contains("alphas")) {
    const json& list = doc.at("alphas");
    if (!list.is_array()) throw ConfigError("alphas", "expected an array of numbers");
    cfg.alphas.clear();
    for (const auto& a : list) {
      if (!a.is_number()) throw ConfigError("alphas", "expected an array of numbers");
      cfg.alphas.push_back(a.get<double>());
    }
  }
  assign_if(doc, "epsilon", cfg.epsilon);
  assign_if(doc, "runs", cfg.runs);
  assign_if(doc, "error_threshold", cfg.error_threshold);
  assign_if(doc, "max_iterations", cfg.max_iterations);
  assign_if(doc, "sim_base_seed", cfg.sim_base_seed);
  assign_if(doc, "eps_amp", cfg.energy.eps_amp);
  assign_if(doc, "e_elec", cfg.energy.e_elec);
  assign_if(doc, "k_bits", cfg.energy.k_bits);
  assign_if(doc, "init_low", cfg.init_low);
  assign_if(doc, "init_high", cfg.init_high);
  if (doc.contains("output_dir")) cfg.output_dir = read_string(doc, "output_dir");
  assign_if(doc, "optimizer_max_iters", cfg.optimizer_max_iters);
  assign_if(doc, "optimizer_step_scale", cfg.optimizer_step_scale);
  assign_if(doc, "optimizer_tol", cfg.optimizer_tol);

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.parent_path());
}

}  // namespace ccons
