#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace modlab {

// Philox4x32-10 counter-based block cipher (Salmon, Moraes, Dror, Shaw,
// "Parallel random numbers: as easy as 1, 2, 3", SC'11). Keyed by
// (seed, stream), indexed by a 128-bit counter, so every draw is a pure
// function of (seed, stream, index) and Monte Carlo runs split across
// threads without coordination.
struct Philox4x32 {
  static constexpr uint32_t kMul0 = 0xD2511F53u;
  static constexpr uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr uint32_t kWeyl1 = 0xBB67AE85u;

  static std::array<uint32_t, 4> block(std::array<uint32_t, 4> ctr,
                                       std::array<uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      const uint64_t p0 = static_cast<uint64_t>(kMul0) * ctr[0];
      const uint64_t p1 = static_cast<uint64_t>(kMul1) * ctr[2];
      const uint32_t hi0 = static_cast<uint32_t>(p0 >> 32);
      const uint32_t lo0 = static_cast<uint32_t>(p0);
      const uint32_t hi1 = static_cast<uint32_t>(p1 >> 32);
      const uint32_t lo1 = static_cast<uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }
};

// Stateless stream of uniforms/normals. normal(i) and uniform(i) may be
// called in any order and from any thread.
class CounterRng {
 public:
  explicit CounterRng(uint64_t seed, uint64_t stream = 0)
      : key_{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)},
        stream_(stream) {}

  // i-th uniform on (0,1]; never returns 0 so log() is safe.
  double uniform(uint64_t i) const {
    const auto b = raw(i / 2);
    const uint64_t w = (i % 2 == 0) ? join(b[0], b[1]) : join(b[2], b[3]);
    return to_unit(w);
  }

  // i-th standard normal via Box-Muller on a dedicated counter block.
  double normal(uint64_t i) const {
    const auto b = raw((i / 2) | (uint64_t{1} << 62));
    const double u1 = to_unit(join(b[0], b[1]));
    const double u2 = to_unit(join(b[2], b[3]));
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    return (i % 2 == 0) ? r * std::cos(theta) : r * std::sin(theta);
  }

  uint64_t stream() const { return stream_; }

 private:
  std::array<uint32_t, 4> raw(uint64_t counter) const {
    return Philox4x32::block({static_cast<uint32_t>(counter),
                              static_cast<uint32_t>(counter >> 32),
                              static_cast<uint32_t>(stream_),
                              static_cast<uint32_t>(stream_ >> 32)},
                             key_);
  }

  static uint64_t join(uint32_t lo, uint32_t hi) {
    return static_cast<uint64_t>(hi) << 32 | lo;
  }

  static double to_unit(uint64_t w) {
    return (static_cast<double>(w >> 11) + 1.0) * 0x1.0p-53;
  }

  std::array<uint32_t, 2> key_;
  uint64_t stream_;
};

}  // namespace modlab
