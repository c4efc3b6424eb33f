#pragma once

#include <cstdint>

namespace cdfpoison {

// SplitMix64 (Steele, Lea, Flood 2014). Counter-based, splittable, and
// platform-independent, so every seeded dataset and control sample is
// reproducible bit-for-bit across machines. All randomness in this project
// flows through this generator.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1), 53 random bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform double in (0, 1]; safe as a log() argument.
  double next_unit_open() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  // Derives an independent stream for a tagged purpose.
  static SplitMix64 derive(std::uint64_t seed, std::uint64_t tag) {
    SplitMix64 mixer(seed);
    std::uint64_t base = mixer.next();
    SplitMix64 tagger(tag);
    return SplitMix64(base ^ tagger.next());
  }

 private:
  std::uint64_t state_;
};

}  // namespace cdfpoison
