#pragma once

#include <cstdint>

namespace zmest {

// splitmix64 step (Vigna). Used for seeding and for deriving substreams.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Deterministic derivation of independent seed streams from one base seed.
// Stream 0 is not the base seed itself, so handing out substream(s, 0),
// substream(s, 1), ... never collides with a direct use of s elsewhere.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  return splitmix64_next(s);
}

// xoshiro256** 1.0 (Blackman & Vigna), seeded via splitmix64.
// The generator is pinned by name and by construction so that a given
// 64-bit seed reproduces the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64_next(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0,1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

}  // namespace zmest
