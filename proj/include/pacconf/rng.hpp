#pragma once

// SplitMix64 streams with index-based splitting.
//
// Stream k of a run seeded with s starts from state mix64(s ^ mix64(k + G)),
// G = 0x9E3779B97F4A7C15, and advances by G per draw, each output being
// mix64(state). Everything is integer arithmetic except the final conversion
// to double, so draws are identical across platforms and compilers. Uniform
// doubles take the top 53 bits; bounded integers use rejection then modulo.

#include <cmath>
#include <cstdint>

namespace pacconf {

class SplitMix64 {
 public:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  static constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  explicit constexpr SplitMix64(std::uint64_t state) noexcept : state_(state) {}

  /// Independent stream `index` of the run seeded with `seed`.
  static constexpr SplitMix64 stream(std::uint64_t seed, std::uint64_t index) noexcept {
    return SplitMix64(seed ^ mix64(index + kGolden));
  }

  constexpr std::uint64_t next() noexcept {
    state_ += kGolden;
    return mix64(state_);
  }

  /// Uniform on [0, 1).
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on [0, n), n >= 1. Draws below 2^64 mod n are rejected so the
  /// modulo is unbiased.
  std::uint64_t below(std::uint64_t n) noexcept {
    const std::uint64_t threshold = (0 - n) % n;
    std::uint64_t r = next();
    while (r < threshold) r = next();
    return r % n;
  }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  /// Exp(1) variate.
  double exponential() noexcept { return -std::log1p(-uniform()); }

 private:
  std::uint64_t state_;
};

}  // namespace pacconf
