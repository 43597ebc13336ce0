#pragma once

#include <cstdint>
#include <random>

namespace logpot {

/// 64-bit Mersenne Twister with a platform-independent mapping to [0, 1).
/// std::uniform_real_distribution is implementation-defined, which would
/// break bit-identical reruns across standard libraries.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for (seed, index); used for per-batch substreams.
  static RandomStream substream(std::uint64_t seed, std::uint64_t index);

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)); }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

}  // namespace logpot
