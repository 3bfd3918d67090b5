#pragma once

#include <cstdint>

namespace ustlab {

// splitmix64 finalizer; full-avalanche 64-bit mix.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic 64-bit random stream (splitmix64). Every randomized routine
// takes one of these by reference; identical seeds give identical draws on
// any platform, independent of thread scheduling (streams are never shared).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : state_(seed), seed_(seed) {}

  // Per-trial stream: seed = mix(master, index). Trial i is reproducible in
  // isolation regardless of how trials are scheduled.
  static RngStream derive(std::uint64_t master_seed, std::uint64_t index) {
    return RngStream(mix64(master_seed ^ (0x9e3779b97f4a7c15ULL + index * 0xa24baed4963ee407ULL)));
  }

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  // Unbiased integer in [0, n); Lemire multiply-shift with rejection.
  std::uint64_t below(std::uint64_t n) {
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      const std::uint64_t t = (0 - n) % n;
      while (lo < t) {
        m = static_cast<unsigned __int128>(next_u64()) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t state_;
  std::uint64_t seed_;
};

}  // namespace ustlab
