#pragma once

// Deterministic randomness shared by topology generation and the experiment
// harness. The exact generator identities are part of the reproducibility
// contract: child seeds come from splitmix64, draws from std::mt19937_64,
// and doubles are built as (x >> 11) * 2^-53 rather than through
// std::uniform_real_distribution, whose output differs across standard
// library implementations.

#include <cstddef>
#include <cstdint>
#include <random>

namespace pnc {

inline constexpr std::uint64_t kSeedStride = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Child seed for stream `index` under `seed`. Chaining calls yields
/// independent reproducible streams, e.g. derive(derive(master, 2 * i), j).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed + kSeedStride * (index + 1));
}

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n), n > 0. One engine draw per call; the floor of
/// u * n is unbiased enough for the n << 2^53 used here and keeps the draw
/// count predictable, which matters for stream reproducibility.
inline std::size_t uniform_index(std::mt19937_64& gen, std::size_t n) {
  auto i = static_cast<std::size_t>(uniform01(gen) * static_cast<double>(n));
  return i < n ? i : n - 1;
}

}  // namespace pnc
