#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sregret {

using Rng = std::mt19937_64;

// SplitMix64 step; also the mixer behind derive_seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Derives an independent stream seed from (master, a, b). Used to hand each
// (repetition, policy) pair its own generator without sharing streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
  std::uint64_t s = master;
  s = splitmix64(s) ^ (a * 0x9E3779B97F4A7C15ull);
  s = splitmix64(s) ^ (b * 0xD1B54A32D192ED03ull);
  return splitmix64(s);
}

// FNV-1a, used to key policy streams by label so that adding or reordering
// policies does not perturb the others.
inline std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline double uniform_unit(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

}  // namespace sregret
