#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace mmlaw {

/// Counter-based generator: the value at a counter depends only on (seed, counter).
///
///   bits(c) = mix(seed + (c + 1) * 0x9E3779B97F4A7C15)
///   mix(z)  : z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
///             z ^= z >> 27; z *= 0x94D049BB133111EB;
///             z ^= z >> 31
///
/// This is the SplitMix64 output function evaluated at an explicit position,
/// so streams are reproducible across platforms and independent of call order.
class CounterRng {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit constexpr CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

  constexpr std::uint64_t seed() const noexcept { return seed_; }

  constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
    std::uint64_t z = seed_ + (counter + 1) * kGamma;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) with 53 random bits.
  constexpr double uniform(std::uint64_t counter) const noexcept {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  /// Uniform integer on [lo, hi]; modulo bias is below 2^-40 for the ranges used here.
  constexpr std::int64_t uniform_int(std::uint64_t counter, std::int64_t lo,
                                     std::int64_t hi) const noexcept {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(bits(counter) % span);
  }

  /// Standard normal via Box-Muller on counters (2c, 2c + 1).
  double normal(std::uint64_t counter) const noexcept {
    const double u1 = static_cast<double>((bits(2 * counter) >> 11) + 1) * 0x1.0p-53;
    const double u2 = uniform(2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t seed_;
};

}  // namespace mmlaw
