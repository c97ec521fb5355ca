#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace parasemi {

/// Philox4x32-10 (Salmon et al. 2011). Stateless: output depends only on
/// (counter, key), so any evaluation order yields the same variates.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kW0;
        key[1] += kW1;
      }
      ctr = single_round(ctr, key);
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;

  static Counter single_round(const Counter& c, const Key& k) noexcept {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
};

/// Stream tags keep independent uses of the same (step, path, mode) apart.
enum class StreamTag : std::uint32_t { convolution = 1, initial = 2, auxiliary = 3 };

/// Standard normal variate addressed by (seed, step, path, mode, tag).
inline double normal_at(std::uint64_t seed, std::uint32_t step, std::uint32_t path,
                        std::uint32_t mode, StreamTag tag) noexcept {
  const Philox4x32::Key key{static_cast<std::uint32_t>(seed),
                            static_cast<std::uint32_t>(seed >> 32)};
  const auto r = Philox4x32::generate({step, path, mode, static_cast<std::uint32_t>(tag)}, key);
  // 53-bit uniforms in [0, 1); Box-Muller on 1 - u1 avoids log(0).
  constexpr double scale = 1.0 / 9007199254740992.0;  // 2^-53
  const std::uint64_t a = (static_cast<std::uint64_t>(r[0]) << 21) ^ (r[1] >> 11);
  const std::uint64_t b = (static_cast<std::uint64_t>(r[2]) << 21) ^ (r[3] >> 11);
  const double u1 = static_cast<double>(a & ((1ull << 53) - 1)) * scale;
  const double u2 = static_cast<double>(b & ((1ull << 53) - 1)) * scale;
  return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace parasemi
