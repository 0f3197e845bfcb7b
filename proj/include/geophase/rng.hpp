#pragma once

// Philox4x32-10 (Salmon et al., SC'11). Stateless: a (key, counter) pair fully
// determines the output block, so any trajectory can be regenerated from
// (seed, sample id, step) regardless of how samples are scheduled.

#include <array>
#include <cstdint>

namespace geophase {

class Philox4x32 {
 public:
  using block = std::array<std::uint32_t, 4>;

  explicit constexpr Philox4x32(std::uint64_t seed)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  constexpr block operator()(std::uint64_t hi, std::uint64_t lo) const {
    block ctr{static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(lo >> 32), static_cast<std::uint32_t>(hi),
              static_cast<std::uint32_t>(hi >> 32)};
    std::array<std::uint32_t, 2> key = key_;
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

  /// Two uniforms in the open interval (0, 1), 53 bits each.
  constexpr std::array<double, 2> uniform_pair(std::uint64_t hi, std::uint64_t lo) const {
    const block b = (*this)(hi, lo);
    const std::uint64_t a = (std::uint64_t{b[0]} << 32) | b[1];
    const std::uint64_t c = (std::uint64_t{b[2]} << 32) | b[3];
    return {to_open_unit(a), to_open_unit(c)};
  }

 private:
  static constexpr double to_open_unit(std::uint64_t x) {
    return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
  }

  static constexpr std::uint32_t kMul0 = 0xD2511F53;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

  std::array<std::uint32_t, 2> key_;
};

}  // namespace geophase
