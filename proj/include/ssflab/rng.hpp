#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace ssflab {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// A block of four 32-bit outputs is a pure function of (counter, key), so any
/// sample's random numbers can be regenerated without replaying a sequence.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) noexcept {
    constexpr std::uint32_t kMul0 = 0xD2511F53u;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }
};

/// Identifies one independent random stream: a 64-bit seed plus up to three
/// 32-bit coordinates (e.g. spatial node, sample index, tag).
struct StreamId {
  std::uint64_t seed = 0;
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  std::uint32_t c = 0;
};

/// Deterministic uniform/normal draws from one Philox stream.
///
/// Block k of the stream is Philox(counter = {k, a, b, c}, key = seed), so the
/// n-th draw does not depend on how many other streams were consumed before.
class CounterStream {
 public:
  explicit CounterStream(StreamId id) noexcept
      : key_{static_cast<std::uint32_t>(id.seed),
             static_cast<std::uint32_t>(id.seed >> 32)},
        a_(id.a),
        b_(id.b),
        c_(id.c) {}

  /// Uniform double in (0, 1), 53 random bits.
  double uniform() noexcept {
    if (used_ >= 4) refill();
    const std::uint64_t hi = words_[used_] >> 5;   // 27 bits
    const std::uint64_t lo = words_[used_ + 1] >> 6;  // 26 bits
    used_ += 2;
    return (static_cast<double>((hi << 26) | lo) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via the Box-Muller transform (pairs are cached).
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  void refill() noexcept {
    words_ = Philox4x32::block({block_++, a_, b_, c_}, key_);
    used_ = 0;
  }

  Philox4x32::Key key_;
  std::uint32_t a_, b_, c_;
  std::uint32_t block_ = 0;
  Philox4x32::Counter words_{};
  int used_ = 4;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ssflab
