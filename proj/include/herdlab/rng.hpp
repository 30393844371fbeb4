#pragma once
// Deterministic random streams. <random> engines are portable but the
// standard leaves distribution algorithms implementation-defined, so Monte
// Carlo results would not be bit-reproducible across platforms; everything
// here is pinned down to the bit.

#include <cstdint>

namespace herdlab {

// SplitMix64 (Steele, Lea, Flood). Used only to expand seeds into state.
struct SplitMix64 {
  std::uint64_t state;

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
};

// xoshiro256++ (Blackman, Vigna).
class Xoshiro256PlusPlus {
 public:
  explicit Xoshiro256PlusPlus(std::uint64_t seed) {
    SplitMix64 sm{seed};
    for (auto& word : s_) word = sm.next();
    // an all-zero state would be a fixed point of the transition
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[3] = 0x9e3779b97f4a7c15ull;
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
};

// Uniform double in [0,1) with 53 random bits.
inline double uniform01(Xoshiro256PlusPlus& rng) {
  return static_cast<double>(rng.next() >> 11) * 0x1.0p-53;
}

// Bernoulli(p) as u < p with u in [0,1): exact at p = 0 (never fires) and
// p = 1 (always fires), which keeps cube corners absorbing.
inline bool bernoulli(Xoshiro256PlusPlus& rng, double p) {
  return uniform01(rng) < p;
}

// Stream for one Monte Carlo run: state expanded by SplitMix64 from
// master_seed + (run_index + 1) * golden gamma. Distinct runs get distinct,
// well-separated streams; a single simulation with seed s uses run 0 of s,
// so a one-run ensemble reproduces it bit for bit.
inline Xoshiro256PlusPlus run_stream(std::uint64_t master_seed, std::uint64_t run_index) {
  return Xoshiro256PlusPlus(master_seed + (run_index + 1) * 0x9e3779b97f4a7c15ull);
}

}  // namespace herdlab
