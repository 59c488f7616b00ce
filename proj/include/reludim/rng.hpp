#pragma once

#include <cstdint>

namespace reludim {

// Counter-friendly splitmix64 stream; identical output on every platform
// for a given seed, which keeps campaign reports byte-reproducible.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0,1)
  double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

  // uniform in [lo, hi] inclusive
  std::int64_t next_int(std::int64_t lo, std::int64_t hi);

  // standard normal via Box-Muller
  double next_gaussian();

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Mixes (seed, a, b, c) into one stream seed; used for per-trial and
/// per-(level, sample) derivation.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0);

}  // namespace reludim
