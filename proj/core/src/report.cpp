#include "ccons/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "ccons/errors.hpp"

namespace ccons {

namespace {

constexpr double kSupportFloor = 1e-6;

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

std::string trace_file_name(double alpha) { return "trace_alpha=" + format_double(alpha) + ".csv"; }

std::string trace_csv(const AveragedTrace& trace, double alpha) {
  std::string out = "alpha,iteration,mean_error,mean_energy\n";
  const std::string a = format_double(alpha);
  for (std::size_t t = 0; t < trace.length(); ++t) {
    out += a;
    out += ',';
    out += std::to_string(t);
    out += ',';
    out += format_double(trace.mean_error[t]);
    out += ',';
    out += format_double(trace.mean_energy[t]);
    out += '\n';
  }
  return out;
}

std::string summary_json(std::span<const AlphaResult> results,
                         std::span<const ClusterCandidate> candidates) {
  nlohmann::json doc = nlohmann::json::array();
  for (const AlphaResult& r : results) {
    const ActivationDistribution& best = r.optimization.best;
    nlohmann::json entry;
    entry["alpha"] = r.alpha;
    entry["feasible"] = r.optimization.feasible;
    entry["xi"] = best.xi;
    entry["objective"] = best.objective;
    entry["expected_cost_l1"] = best.expected_cost_l1;

    nlohmann::json support = nlohmann::json::array();
    if (r.optimization.feasible) {
      std::vector<std::size_t> order;
      for (Eigen::Index i = 0; i < best.p.size(); ++i) {
        if (best.p(i) > kSupportFloor) order.push_back(std::size_t(i));
      }
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return best.p(Eigen::Index(a)) > best.p(Eigen::Index(b));
      });
      for (std::size_t i : order) {
        support.push_back({{"head", candidates[i].head},
                           {"members", candidates[i].members},
                           {"probability", best.p(Eigen::Index(i))}});
      }
    }
    entry["support"] = std::move(support);

    std::optional<double> iterations;
    std::optional<double> energy;
    if (r.trace) {
      iterations = r.trace->mean_iterations_to_threshold;
      energy = r.trace->mean_energy_at_threshold;
    }
    entry["mean_iterations_to_threshold"] = optional_number(iterations);
    entry["mean_energy_at_threshold"] = optional_number(energy);
    doc.push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

void write_trace_csv(const AveragedTrace& trace, double alpha, const std::filesystem::path& path) {
  write_file(path, trace_csv(trace, alpha));
}

void write_summary_json(std::span<const AlphaResult> results,
                        std::span<const ClusterCandidate> candidates,
                        const std::filesystem::path& path) {
  write_file(path, summary_json(results, candidates));
}

}  // namespace ccons
