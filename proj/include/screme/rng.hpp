#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace screme {

// SplitMix64. Chosen as the project-wide generator because it is a pure
// counter generator: output i is mix64(seed + (i+1)*GAMMA), so streams can be
// derived and replayed bit-for-bit on any platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Unbiased integer in [0, bound). Lemire multiply-shift with rejection.
  uint32_t next_below(uint32_t bound) {
    uint64_t m = static_cast<uint64_t>(static_cast<uint32_t>(next_u64())) * bound;
    uint32_t lo = static_cast<uint32_t>(m);
    if (lo < bound) {
      uint32_t threshold = (0u - bound) % bound;
      while (lo < threshold) {
        m = static_cast<uint64_t>(static_cast<uint32_t>(next_u64())) * bound;
        lo = static_cast<uint32_t>(m);
      }
    }
    return static_cast<uint32_t>(m >> 32);
  }

  // [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool next_bernoulli(double p) { return next_unit() < p; }

  static uint64_t mix(uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Seed for a substream: each tag folded through the finalizer, so
  // derive(s,{a,b}) and derive(s,{b,a}) differ.
  static uint64_t derive(uint64_t seed, std::initializer_list<uint64_t> tags) {
    uint64_t h = mix(seed);
    for (uint64_t t : tags) h = mix(h ^ t);
    return h;
  }

 private:
  uint64_t state_;
};

// Knuth multiplication method; fine for the small rates used here.
inline int poisson(Rng& rng, double lambda) {
  if (lambda <= 0.0) return 0;
  const double target = std::exp(-lambda);
  double l = 1.0;
  int k = -1;
  do {
    ++k;
    l *= rng.next_unit();
  } while (l > target);
  return k;
}

}  // namespace screme
