#pragma once

#include <cmath>
#include <cstdint>

namespace lostu {

/// Deterministic xoshiro256++ generator with splitmix64 seeding.
///
/// Streams are constructed from a user seed plus up to two stream ids
/// (e.g. grid index and trial index), so independent per-trial streams can
/// be created on any thread without sharing state. All outputs are
/// bit-reproducible across platforms; no libstdc++ distributions are used.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream_a = 0,
               std::uint64_t stream_b = 0) {
    std::uint64_t x = seed;
    x = mix(x + 0x9e3779b97f4a7c15ULL * (stream_a + 1));
    x = mix(x + 0x9e3779b97f4a7c15ULL * (stream_b + 1));
    for (auto& word : state_) {
      x += 0x9e3779b97f4a7c15ULL;
      word = mix(x);
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random mantissa bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal deviate (Box-Muller, pair cached).
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    cached_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_[4];
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace lostu
