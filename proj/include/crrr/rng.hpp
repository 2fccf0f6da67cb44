#pragma once

#include <cstdint>

namespace crrr::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

/// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Counter-based SplitMix64 stream. A (seed, substream) pair pins the whole
/// sequence, so replicate k can be generated independently of replicates
/// 0..k-1 and of execution order.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t substream)
      : state_(mix64(mix64(seed + kGolden) ^ ((substream + 1) * 0xD2B74407B1CE6E93ULL))) {}

  std::uint64_t next_u64() {
    state_ += kGolden;
    return mix64(state_);
  }

  /// Uniform draw strictly inside (0, 1) with 53-bit resolution; never returns
  /// an endpoint, so it can feed inverse-CDF transforms directly.
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via inverse CDF of next_uniform().
  double next_normal();

  /// Unbiased draw from {0, ..., bound-1}.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  std::uint64_t state_;
};

/// Seed for a nested unit of work (e.g. Monte Carlo cell a, replicate b).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  std::uint64_t h = mix64(seed + kGolden);
  h = mix64(h ^ (a + 0xA0761D6478BD642FULL));
  h = mix64(h ^ (b + 0xE7037ED1A0B428DBULL));
  return h;
}

/// Name recorded in reports next to seeds so runs can be replicated elsewhere.
inline const char* kGeneratorName = "splitmix64";

}  // namespace crrr::rng
