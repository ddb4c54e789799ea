#pragma once

// Deterministic RNG streams. Every replicate (bootstrap draw, simulation run,
// CV fold split) gets its own generator seeded by (master_seed, index) through
// a splitmix64 scramble, so results are independent of scheduling and thread
// count, and stable across runs.

#include <cstdint>
#include <random>

namespace scqr {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// generator for stream `index` of the family identified by `master_seed`
inline std::mt19937_64 make_stream(std::uint64_t master_seed, std::uint64_t index = 0) {
  std::uint64_t s = master_seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  const std::uint64_t a = splitmix64(s);
  const std::uint64_t b = splitmix64(s);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace scqr
