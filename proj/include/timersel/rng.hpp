#pragma once

#include <cstdint>

namespace timersel {

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// SplitMix64 stream. Cheap to construct, so one stream per Monte Carlo
// trial is affordable; see trial_stream below.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    return mix64(z);
  }

  // uniform double in [0, 1)
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

// Counter-based stream derivation: the stream for trial i depends only on
// (seed, i), never on which thread runs it or in what order.
inline SplitMix64 trial_stream(std::uint64_t seed, std::uint64_t trial_index) {
  return SplitMix64(mix64(seed + 0x9E3779B97F4A7C15ULL * (trial_index + 1)));
}

}  // namespace timersel
