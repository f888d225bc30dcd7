#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "ccons/candidates.hpp"
#include "ccons/experiment.hpp"
#include "ccons/simulator.hpp"

namespace ccons {

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);

/// trace_alpha=<alpha>.csv
std::string trace_file_name(double alpha);

/// Header `alpha,iteration,mean_error,mean_energy`, one row per iteration.
std::string trace_csv(const AveragedTrace& trace, double alpha);

/// JSON array with one object per alpha.
std::string summary_json(std::span<const AlphaResult> results,
                         std::span<const ClusterCandidate> candidates);

/// Throws IoError on failure.
void write_trace_csv(const AveragedTrace& trace, double alpha, const std::filesystem::path& path);
void write_summary_json(std::span<const AlphaResult> results,
                        std::span<const ClusterCandidate> candidates,
                        const std::filesystem::path& path);

}  // namespace ccons
