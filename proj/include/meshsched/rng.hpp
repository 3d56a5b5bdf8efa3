#pragma once

#include <cstdint>
#include <initializer_list>

namespace meshsched {

// 64-bit finalizer from splitmix64. Used for seed expansion and for deriving
// independent substream seeds from (seed, ids...) tuples.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Folds a list of ids into a base seed. Same inputs give the same substream
// seed on every platform, which is what makes parallel sweeps reproducible.
inline uint64_t derive_seed(uint64_t base, std::initializer_list<uint64_t> parts) {
  uint64_t s = mix64(base);
  for (uint64_t p : parts) s = mix64(s ^ (p + 0x9e3779b97f4a7c15ull));
  return s;
}

// xoshiro256++ (Blackman & Vigna), seeded through splitmix64. Chosen over the
// standard-library engines because its integer output sequence is fully
// specified here, independent of any library's distribution implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t sm = seed;
    for (auto& w : s_) {
      sm += 0x9e3779b97f4a7c15ull;
      uint64_t z = sm;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
      w = z ^ (z >> 31);
    }
  }

  uint64_t next() {
    auto rotl = [](uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
    uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform double in [lo, hi) built from the top 53 bits; no distribution
  // object involved, so the draw sequence is platform independent.
  double uniform(double lo, double hi) {
    double u = double(next() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  }

  // Unbiased integer in [0, bound) via multiply-with-rejection.
  uint64_t below(uint64_t bound) {
    unsigned __int128 m = (unsigned __int128)next() * bound;
    uint64_t lo = (uint64_t)m;
    if (lo < bound) {
      uint64_t threshold = (0 - bound) % bound;
      while (lo < threshold) {
        m = (unsigned __int128)next() * bound;
        lo = (uint64_t)m;
      }
    }
    return (uint64_t)(m >> 64);
  }

 private:
  uint64_t s_[4];
};

}  // namespace meshsched
