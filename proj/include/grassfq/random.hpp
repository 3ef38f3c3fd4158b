#pragma once

#include <cstdint>
#include <random>

namespace grassfq {

/// Seedable 64-bit generator with a platform-independent output stream.
///
/// The engine is std::mt19937_64, whose raw sequence is fixed by the standard.
/// Bounded integers use rejection sampling and doubles take the top 53 bits, so
/// no implementation-defined std distribution is involved.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = -bound % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t x = engine_();
      if (x >= limit) return x % bound;
    }
  }

  /// Uniform on [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace grassfq
