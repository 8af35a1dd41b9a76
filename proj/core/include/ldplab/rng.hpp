#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace ldp {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
///
/// A stream is addressed by (seed, stream): the seed is the 64-bit key and the
/// stream index fills the upper half of the 128-bit counter. Draws inside a
/// stream advance the lower half. Output depends only on integer arithmetic,
/// so the bit stream is identical on every platform. Replica r of an
/// experiment always uses stream r.
class Philox {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint32_t, 4>;

  Philox(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    if (have_ == 0) {
      block_ = generate(counter_block(position_++), key_);
      have_ = 2;
    }
    const int i = 2 - have_--;
    return (static_cast<std::uint64_t>(block_[2 * i + 1]) << 32) | block_[2 * i];
  }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard exponential via inversion.
  double exponential() noexcept;

  /// Standard normal via Box-Muller (one value per call; no cached pair so the
  /// stream position is a pure function of the number of calls).
  double normal() noexcept;

  std::uint64_t stream() const noexcept { return stream_; }

  /// Raw Philox4x32-10 bijection, exposed for known-answer tests.
  static Block generate(Block counter, std::array<std::uint32_t, 2> key) noexcept;

 private:
  Block counter_block(std::uint64_t pos) const noexcept {
    return {static_cast<std::uint32_t>(pos), static_cast<std::uint32_t>(pos >> 32),
            static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
  }

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t position_ = 0;
  Block block_{};
  int have_ = 0;
};

}  // namespace ldp
