#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace rgp {

// splitmix64 finalizer. Used to derive independent seeds from (seed, index)
// pairs so that parallel streams are reproducible.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t mix_seed(uint64_t seed, uint64_t index) {
  return splitmix64(seed ^ splitmix64(index));
}

using Rng = std::mt19937_64;

// Uniform double in [0, 1) from one 64-bit draw. std::uniform_real_distribution
// is implementation-defined, so all randomness goes through these helpers.
inline double rng_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n). Rejection sampling keeps the mapping exact.
inline uint64_t rng_below(Rng& rng, uint64_t n) {
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % n;
}

inline int rng_range(Rng& rng, int lo, int hi) {  // inclusive bounds
  return lo + static_cast<int>(rng_below(rng, static_cast<uint64_t>(hi - lo + 1)));
}

template <typename T>
void rng_shuffle(Rng& rng, std::vector<T>& items) {
  for (size_t i = items.size(); i > 1; --i) {
    const size_t j = static_cast<size_t>(rng_below(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace rgp
