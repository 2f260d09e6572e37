#pragma once

#include <cstdint>

namespace normcurve {

// SplitMix64. Used directly as the project RNG so that streams are
// reproducible across platforms and standard-library versions.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n) by rejection; n >= 1.
  uint64_t below(uint64_t n) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % n;
  }

  // Uniform integer in [lo, hi], inclusive.
  long long range(long long lo, long long hi) {
    return lo + static_cast<long long>(below(static_cast<uint64_t>(hi - lo + 1)));
  }

 private:
  uint64_t state_;
};

// Per-trial seed derivation: mix the trial index into the master seed with
// the SplitMix64 finalizer. Fixed project-wide so parallel trial streams
// are independent of scheduling and reproducible from (master, index).
inline uint64_t derive_seed(uint64_t master, uint64_t index) {
  SplitMix64 mix(master ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
  return mix.next();
}

}  // namespace normcurve
