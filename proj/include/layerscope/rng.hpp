#pragma once

#include <cmath>
#include <cstdint>

namespace layerscope {

/// PCG32 (XSH-RR output) with an explicit stream selector, so a (seed,
/// stream) pair names an independent sequence regardless of draw order
/// elsewhere. Normals use Box-Muller; results are bit-reproducible across
/// platforms, unlike std::normal_distribution.
class Pcg32 {
 public:
  Pcg32(std::uint64_t seed, std::uint64_t stream) : inc_((stream << 1u) | 1u) {
    next_u32();
    state_ += seed;
    next_u32();
  }

  std::uint32_t next_u32() {
    const std::uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + inc_;
    const auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    const auto rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
  }

  /// Uniform on [0, 1) with 53 random bits.
  double next_double() {
    const std::uint64_t hi = next_u32() >> 5u;  // 27 bits
    const std::uint64_t lo = next_u32() >> 6u;  // 26 bits
    return static_cast<double>((hi << 26u) | lo) * 0x1.0p-53;
  }

  double next_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_ = 0;
  std::uint64_t inc_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace layerscope
