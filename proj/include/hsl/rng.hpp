#pragma once

#include <cstdint>

namespace hsl {

/// SplitMix64 (Steele, Lea, Flood). Small, fast, and splittable by keying the start
/// state, which is all the walkers need.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Independent stream for item `index` of a run seeded with `seed`. Streams depend
/// only on (seed, index), so work can be reordered or distributed without changing
/// any draw.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64(SplitMix64::mix(seed ^ 0x243F6A8885A308D3ULL) ^
                    SplitMix64::mix(index + 0x13198A2E03707344ULL));
}

/// Two-bit direction draws buffered from 64-bit words.
class DirectionSource {
 public:
  explicit DirectionSource(SplitMix64 rng) : rng_(rng) {}

  unsigned next() {
    if (left_ == 0) {
      word_ = rng_.next();
      left_ = 32;
    }
    const unsigned d = static_cast<unsigned>(word_ & 3u);
    word_ >>= 2;
    --left_;
    return d;
  }

  double uniform() { return rng_.uniform(); }

 private:
  SplitMix64 rng_;
  std::uint64_t word_ = 0;
  int left_ = 0;
};

}  // namespace hsl
