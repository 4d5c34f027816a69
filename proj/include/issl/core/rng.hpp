#pragma once

#include <cstdint>

namespace issl {

/// SplitMix64 generator. The integer stream is fully specified, and doubles
/// are formed as (x >> 11) * 2^-53, so a seed reproduces the same samples on
/// every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next_u64();

  /// Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Integer uniform on [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  /// Standard normal via Box-Muller (one draw per call, no cached pair).
  double normal();

  /// Independent child stream for ensemble member `stream`; does not advance
  /// this generator.
  Rng split(std::uint64_t stream) const;

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

/// The SplitMix64 output function.
std::uint64_t mix64(std::uint64_t z);

}  // namespace issl
