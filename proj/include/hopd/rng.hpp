#pragma once

#include <cstdint>

namespace hopd {

/// PCG32 (XSH-RR output, 64-bit LCG state). Distinct streams give
/// independent sequences from the same seed.
class Pcg32 {
public:
  explicit Pcg32(std::uint64_t seed, std::uint64_t stream = 0) { reseed(seed, stream); }

  void reseed(std::uint64_t seed, std::uint64_t stream) {
    state_ = 0;
    inc_ = (stream << 1) | 1u;
    next();
    state_ += seed;
    next();
  }

  std::uint32_t next() {
    std::uint64_t old = state_;
    state_ = old * 6364136223846793005ull + inc_;
    auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    auto rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((0u - rot) & 31u));
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    std::uint64_t a = next() >> 5, b = next() >> 6;
    return (static_cast<double>(a) * 67108864.0 + static_cast<double>(b)) * (1.0 / 9007199254740992.0);
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n) without modulo bias.
  std::uint32_t bounded(std::uint32_t n) {
    std::uint32_t threshold = (0u - n) % n;
    for (;;) {
      std::uint32_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  /// Child generator on its own stream.
  Pcg32 split(std::uint64_t stream) {
    std::uint64_t s = (std::uint64_t{next()} << 32) | next();
    return Pcg32(s, stream);
  }

private:
  std::uint64_t state_ = 0, inc_ = 0;
};

} // namespace hopd
