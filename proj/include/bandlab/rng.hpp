#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace bandlab {

/// Philox4x32-10 counter-based generator. A (key, counter) pair maps to four
/// 32-bit words; streams are addressed, never stepped, so sampling is a pure
/// function of (seed, counter) and parallel draws need no shared state.
struct Philox {
  static constexpr std::uint32_t M0 = 0xD2511F53u;
  static constexpr std::uint32_t M1 = 0xCD9E8D57u;
  static constexpr std::uint32_t W0 = 0x9E3779B9u;
  static constexpr std::uint32_t W1 = 0xBB67AE85u;

  static std::array<std::uint32_t, 4> block(std::uint64_t key, std::uint64_t ctr_hi,
                                            std::uint64_t ctr_lo) {
    std::uint32_t x0 = static_cast<std::uint32_t>(ctr_lo);
    std::uint32_t x1 = static_cast<std::uint32_t>(ctr_lo >> 32);
    std::uint32_t x2 = static_cast<std::uint32_t>(ctr_hi);
    std::uint32_t x3 = static_cast<std::uint32_t>(ctr_hi >> 32);
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    for (int round = 0; round < 10; ++round) {
      if (round) {
        k0 += W0;
        k1 += W1;
      }
      const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * x0;
      const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * x2;
      const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      const std::uint32_t y0 = hi1 ^ x1 ^ k0;
      const std::uint32_t y1 = lo1;
      const std::uint32_t y2 = hi0 ^ x3 ^ k1;
      const std::uint32_t y3 = lo0;
      x0 = y0;
      x1 = y1;
      x2 = y2;
      x3 = y3;
    }
    return {x0, x1, x2, x3};
  }
};

/// SplitMix64 finalizer; used to derive independent subkeys (per trial,
/// per purpose) from a master seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Sequential view over one Philox stream: fixed (key, stream id), counter
/// increments as values are consumed.
class CounterRng {
 public:
  CounterRng(std::uint64_t key, std::uint64_t stream) : key_(key), hi_(stream) {}

  std::uint32_t next_u32() {
    if (pos_ == 4) {
      buf_ = Philox::block(key_, hi_, lo_++);
      pos_ = 0;
    }
    return buf_[pos_++];
  }

  /// uniform in [0,1) with 53 random bits
  double next_double() {
    const std::uint64_t a = next_u32();
    const std::uint64_t b = next_u32();
    return static_cast<double>(((a << 32) | b) >> 11) * 0x1.0p-53;
  }

  /// standard normal (Box-Muller; second value cached)
  double next_gauss() {
    if (have_gauss_) {
      have_gauss_ = false;
      return cached_;
    }
    const double u1 = next_double();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    const double t = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(t);
    have_gauss_ = true;
    return r * std::cos(t);
  }

  /// +1 or -1, equal probability
  double next_sign() { return (next_u32() & 1u) ? 1.0 : -1.0; }

  /// centered uniform scaled to unit variance
  double next_uniform_unit_var() { return std::sqrt(3.0) * (2.0 * next_double() - 1.0); }

 private:
  std::uint64_t key_;
  std::uint64_t hi_;
  std::uint64_t lo_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;
  bool have_gauss_ = false;
  double cached_ = 0.0;
};

}  // namespace bandlab
