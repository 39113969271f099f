#ifndef SPECSUM_RNG_HPP
#define SPECSUM_RNG_HPP

#include <cstdint>

namespace specsum {

// Counter-based randomness: every draw is a pure function of
// (seed, stream, counter), so sample i's randomness never depends on how many
// workers ran samples 0..i-1. splitmix64 finalizer as the mixing function.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rng_key(std::uint64_t seed, std::uint64_t stream) {
  return mix64(mix64(seed) ^ (stream * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
}

// A stateless stream plus a running counter; cheap to fork by key.
struct CounterRng {
  std::uint64_t key = 0;
  std::uint64_t counter = 0;

  CounterRng() = default;
  CounterRng(std::uint64_t seed, std::uint64_t stream) : key(rng_key(seed, stream)) {}

  std::uint64_t next_u64() { return mix64(key ^ (0x9e3779b97f4a7c15ULL * ++counter)); }

  // Uniform double in [0, 1) from the top 53 bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform double in [lo, hi).
  double next_double(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Uniform in {0, ..., n-1} by rejection, no modulo bias.
  std::uint64_t next_index(std::uint64_t n) {
    const std::uint64_t lim = n * (UINT64_MAX / n);
    for (;;) {
      std::uint64_t u = next_u64();
      if (u < lim) return u % n;
    }
  }
};

}  // namespace specsum

#endif
