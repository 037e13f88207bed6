#pragma once

#include <cmath>
#include <cstdint>

namespace rasc {

// PCG32 (Melissa O'Neill). Self-contained so seeded runs reproduce
// bit-for-bit regardless of the standard library.
class Rng {
public:
  explicit Rng(uint64_t seed = 0x853c49e6748fea9bull, uint64_t stream = 0xda3e39cb94b95bdbull) {
    state_ = 0;
    inc_ = (stream << 1) | 1u;
    next_u32();
    state_ += seed;
    next_u32();
  }

  uint32_t next_u32() {
    uint64_t old = state_;
    state_ = old * 6364136223846793005ull + inc_;
    uint32_t xorshifted = uint32_t(((old >> 18) ^ old) >> 27);
    uint32_t rot = uint32_t(old >> 59);
    return (xorshifted >> rot) | (xorshifted << ((32 - rot) & 31));
  }

  uint64_t next_u64() { return (uint64_t(next_u32()) << 32) | next_u32(); }

  // [0, bound)
  uint32_t below(uint32_t bound) {
    uint32_t threshold = (0u - bound) % bound;
    for (;;) {
      uint32_t r = next_u32();
      if (r >= threshold) return r % bound;
    }
  }

  // [0, 1)
  double uniform() { return next_u32() * (1.0 / 4294967296.0); }

  // (lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1, u2;
    do {
      u1 = uniform();
    } while (u1 <= 1e-12);
    u2 = uniform();
    double mag = std::sqrt(-2.0 * std::log(u1));
    spare_ = mag * std::sin(6.283185307179586 * u2);
    have_spare_ = true;
    return mag * std::cos(6.283185307179586 * u2);
  }

private:
  uint64_t state_;
  uint64_t inc_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace rasc
