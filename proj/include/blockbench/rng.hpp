#pragma once

#include <cstdint>
#include <limits>

namespace blockbench {

/// Keyed counter-based generator (SplitMix64 over a hashed stream key).
///
/// A stream is identified by its key alone, so `StreamRng(seed).split(a).split(b)`
/// yields the same sequence no matter which thread builds it or in what order.
/// Simulations derive one substream per (sample, replication, design, block).
class StreamRng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr StreamRng(std::uint64_t seed) noexcept : key_(mix(seed ^ kSeedSalt)) {}

  /// Child stream keyed by `id`; the parent is left untouched.
  constexpr StreamRng split(std::uint64_t id) const noexcept {
    return StreamRng(Raw{}, mix(key_ ^ mix(id + kGolden)));
  }

  constexpr result_type operator()() noexcept { return mix(key_ + (++counter_) * kGolden); }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound); bound > 0. Rejection keeps it unbiased.
  std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t r;
    do {
      r = (*this)();
    } while (r >= limit);
    return r % bound;
  }

  bool coin() noexcept { return ((*this)() >> 63) != 0; }

  constexpr std::uint64_t key() const noexcept { return key_; }

 private:
  struct Raw {};
  constexpr StreamRng(Raw, std::uint64_t key) noexcept : key_(key) {}

  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kSeedSalt = 0xD1B54A32D192ED03ULL;

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace blockbench
