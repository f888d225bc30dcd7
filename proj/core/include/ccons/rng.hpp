#pragma once

#include <cstdint>
#include <random>

namespace ccons {

/// All randomness in the library flows through this engine. The conversion
/// helpers below are written out explicitly so that streams are reproducible
/// across standard library implementations (std::uniform_real_distribution
/// is not).
using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng{seed}; }

/// Uniform on [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform on [low, high); returns `low` when the interval is degenerate.
inline double uniform(Rng& rng, double low, double high) {
  if (low == high) return low;
  return low + (high - low) * uniform01(rng);
}

}  // namespace ccons
