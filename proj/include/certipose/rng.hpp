#ifndef CERTIPOSE_RNG_HPP
#define CERTIPOSE_RNG_HPP

#include <cstdint>

namespace certipose {

// SplitMix64 counter generator. Used instead of std::mt19937 so that
// generated fixtures are reproducible bit-for-bit across platforms and
// standard-library versions.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  // Derived stream for an independent substream (one per Monte Carlo run).
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t index) {
    return SplitMix64(seed + index);
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Uniform angle in (-pi, pi].
  double angle();

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double gaussian();

 private:
  std::uint64_t state_;
  bool has_cached_{false};
  double cached_{0.0};
};

}  // namespace certipose

#endif
