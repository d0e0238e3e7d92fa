#pragma once

// Portable, seedable random stream.
//
// Generator: xoshiro256** (Blackman & Vigna), state filled from the seed by
// splitmix64. Every derived quantity (uniform doubles, bounded integers,
// substream seeds) is computed with integer arithmetic and IEEE double
// operations only, so an identical seed yields an identical draw sequence on
// every platform. std:: distributions are deliberately not used anywhere in the
// library because their algorithms are implementation-defined.

#include <array>
#include <cstdint>
#include <limits>

namespace randcompare {

/// splitmix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of substream (a, b) under `seed`. Used for per-replicate streams so
/// results do not depend on which thread runs which replicate.
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t a,
                                       std::uint64_t b = 0) noexcept {
  constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = mix64(seed + kGolden);
  z = mix64(z ^ (a + 1) * kGolden);
  z = mix64(z ^ (b + 1) * 0xd1b54a32d192ed03ULL);
  return z;
}

class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed) noexcept;

  static RngStream substream(std::uint64_t seed, std::uint64_t a,
                             std::uint64_t b = 0) noexcept {
    return RngStream(substream_seed(seed, a, b));
  }

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next() noexcept;
  result_type operator()() noexcept { return next(); }
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
  /// Uniform on (0, 1).
  double uniform_open() noexcept {
    return (static_cast<double>(next() >> 12) + 0.5) * 0x1.0p-52;
  }
  /// Uniform integer on [0, bound); bound > 0. Lemire's multiply-shift with
  /// rejection, so the result is exactly uniform.
  std::uint64_t bounded(std::uint64_t bound) noexcept;

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_;
};

}  // namespace randcompare
