// Portable uniform/exponential draws on top of std::mt19937_64. The standard
// distributions are implementation-defined, so seeded outputs would differ
// across standard libraries; these fixed mappings keep golden files stable.
#pragma once

#include <cmath>
#include <random>

namespace crossflow::rng {

// Uniform double in [0, 1) from the top 53 bits of one engine draw.
inline double uniform01(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& engine, double lo, double hi) {
  return lo + (hi - lo) * uniform01(engine);
}

// Uniform integer in [0, n); the 64-bit draw makes modulo bias negligible.
inline int uniform_index(std::mt19937_64& engine, int n) {
  return static_cast<int>(engine() % static_cast<std::uint64_t>(n));
}

// Exponential with the given mean; log1p keeps u == 0 finite.
inline double exponential(std::mt19937_64& engine, double mean) {
  return -mean * std::log1p(-uniform01(engine));
}

}  // namespace crossflow::rng
