#pragma once

#include <cstdint>
#include <random>

namespace rlnc {

/// Single-owner pseudo-random stream. mt19937_64 output is fully pinned by
/// the standard, so draws are reproducible across platforms.
using RandomStream = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Stateless seed for an independent sub-stream, e.g. one Monte Carlo trial.
constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(mix64(master) ^ mix64(index + 0x632be59bd9b4e019ull));
}

inline RandomStream make_stream(std::uint64_t master, std::uint64_t index) {
  return RandomStream(stream_seed(master, index));
}

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double unit_double(RandomStream& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace rlnc
