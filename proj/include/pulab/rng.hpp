#pragma once

#include <cstdint>

namespace pulab {

inline uint64_t splitmix64_next(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// xoshiro256++ with splitmix64 state expansion. Self-contained so that
// streams are bit-identical across platforms and standard libraries.
class RngStream {
 public:
  explicit RngStream(uint64_t seed) {
    uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64_next(sm);
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on [0,1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return next_double() < p; }

 private:
  static uint64_t rotl(uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  uint64_t s_[4];
};

// Stream key for (campaign seed, grid index, replicate index). Keys are
// hashed through two splitmix64 rounds so nearby indices decorrelate.
inline uint64_t derive_seed(uint64_t seed, uint64_t a, uint64_t b) {
  uint64_t z = seed;
  uint64_t h = splitmix64_next(z);
  z = h ^ (0x9E3779B97F4A7C15ull * (a + 1));
  h = splitmix64_next(z);
  z = h ^ (0xC2B2AE3D27D4EB4Full * (b + 1));
  return splitmix64_next(z);
}

inline RngStream derive_stream(uint64_t seed, uint64_t a, uint64_t b) {
  return RngStream(derive_seed(seed, a, b));
}

}  // namespace pulab
