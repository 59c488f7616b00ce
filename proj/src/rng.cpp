#include "reludim/rng.hpp"

#include <cmath>

namespace reludim {

std::int64_t SplitMix64::next_int(std::int64_t lo, std::int64_t hi) {
  std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  // rejection sampling keeps the draw unbiased
  std::uint64_t limit = ~0ULL - (~0ULL % span);
  std::uint64_t u;
  do {
    u = next_u64();
  } while (u >= limit && span != 0);
  return lo + static_cast<std::int64_t>(u % span);
}

double SplitMix64::next_gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1, u2;
  do {
    u1 = next_double();
  } while (u1 <= 0.0);
  u2 = next_double();
  double mag = std::sqrt(-2.0 * std::log(u1));
  spare_ = mag * std::sin(2.0 * M_PI * u2);
  have_spare_ = true;
  return mag * std::cos(2.0 * M_PI * u2);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) {
  SplitMix64 mix(seed ^ 0xa0761d6478bd642fULL);
  std::uint64_t s = mix.next_u64();
  s ^= a + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
  SplitMix64 mix2(s);
  s = mix2.next_u64();
  s ^= b + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
  SplitMix64 mix3(s);
  s = mix3.next_u64();
  s ^= c + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
  SplitMix64 mix4(s);
  return mix4.next_u64();
}

}  // namespace reludim
