#pragma once

#include <cstdint>

namespace sumk {

/// Counter-based PRNG: a splitmix64 stream whose start counter is derived by
/// hashing (seed, stream). Draws for stream i are identical no matter how
/// streams are scheduled, which keeps Monte Carlo runs reproducible.
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t stream)
      : counter_(mix(seed + 0x9E3779B97F4A7C15ULL) ^
                 mix(stream + 0xD1B54A32D192ED03ULL)) {}

  std::uint64_t next_u64() {
    counter_ += 0x9E3779B97F4A7C15ULL;
    return mix(counter_);
  }

  /// Uniform in [0, 1).
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t counter_;
};

}  // namespace sumk
