#ifndef ROBSUB_RANDOM_HPP
#define ROBSUB_RANDOM_HPP

#include <cstdint>
#include <random>

namespace robsub {

/// Seeded generator with platform-independent uniform draws.  All randomized
/// components in the library go through this wrapper so that a (config, seed)
/// pair reproduces runs bit-for-bit.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1).
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [lo, hi] inclusive.
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
    return lo + engine_() % (hi - lo + 1);
  }

  bool bernoulli(double p) { return uniform01() < p; }

private:
  std::mt19937_64 engine_;
};

} // namespace robsub

#endif // ROBSUB_RANDOM_HPP
