#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace pgsw {

/// SplitMix64 finalizer. Bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// FNV-1a over a label, used to fold stage names into stream keys.
constexpr std::uint64_t hash_label(std::string_view label) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Stream key = hash(master seed || stage label || unit index).
constexpr std::uint64_t derive_key(std::uint64_t seed, std::string_view stage,
                                   std::uint64_t unit = 0) noexcept {
  return mix64(mix64(mix64(seed) ^ hash_label(stage)) ^ mix64(unit + 0x632be59bd9b4e019ULL));
}

/// Counter-based generator: output i is mix64(key + i * golden). Two streams with different
/// keys are independent for all practical purposes, and a stream's output does not depend on
/// which thread drives it.
class Stream {
public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t key) noexcept : state_(key) {}
  Stream(std::uint64_t seed, std::string_view stage, std::uint64_t unit = 0) noexcept
      : state_(derive_key(seed, stage, unit)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) by Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t bound) noexcept {
    if (bound <= 1) return 0;
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
      if (static_cast<std::uint64_t>(m) >= threshold) return static_cast<std::uint64_t>(m >> 64);
    }
  }

private:
  std::uint64_t state_;
};

}  // namespace pgsw
