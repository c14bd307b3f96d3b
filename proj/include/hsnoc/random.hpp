#ifndef HSNOC_RANDOM_HPP
#define HSNOC_RANDOM_HPP

#include <cstdint>
#include <random>

namespace hsnoc {

// std::mt19937_64's output sequence is fixed by the standard, but the
// <random> distributions are not, so draws go through these helpers to keep
// traces and GA runs bit-identical across standard libraries.
using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// Uniform integer in [0, n), n > 0.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v = rng();
  while (v >= limit) v = rng();
  return v % n;
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

}  // namespace hsnoc

#endif  // HSNOC_RANDOM_HPP
