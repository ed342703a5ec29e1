#pragma once

#include <cstdint>
#include <random>

namespace opdyn {

/// Generator used throughout; its output sequence is fixed by the standard,
/// so seeded runs reproduce across platforms.
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) with 53 random bits.
[[nodiscard]] inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform index in [0, n). Lemire's multiply-shift; bias below 2^-32 for the
/// population sizes used here.
__extension__ using u128 = unsigned __int128;

[[nodiscard]] inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  return static_cast<std::uint64_t>((static_cast<u128>(rng()) * n) >> 64);
}

/// Seed for the k-th independent stream derived from a master seed (splitmix64).
[[nodiscard]] inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t k) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace opdyn
