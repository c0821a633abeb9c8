#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace matchmix {

// Every sampler takes one of these by reference. Streams are never shared
// between replicas.
using Rng = std::mt19937_64;

// SplitMix64 finaliser, used only to spread seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic stream for (master seed, replica). Distinct inputs feed
// distinct seed sequences, so streams never alias.
Rng derive_stream(std::uint64_t master_seed, std::uint64_t replica);

// Uniform integer in [0, bound).
inline std::size_t uniform_index(Rng& rng, std::size_t bound) {
  return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng);
}

inline bool fair_coin(Rng& rng) { return (rng() >> 63) != 0; }

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace matchmix
