#include "core/rng.hpp"

#include <cmath>
#include <numbers>

#include "core/errors.hpp"

namespace l3s3tv {

std::uint64_t splitmix_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::next_u64() {
  state_ += 0x9E3779B97F4A7C15ull;
  return splitmix_mix(state_);
}

double SplitMix64::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SplitMix64::next_uniform(double lo, double hi) {
  if (!(lo <= hi)) fail_argument("next_uniform: empty range");
  return lo + (hi - lo) * next_double();
}

std::int64_t SplitMix64::next_int(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) fail_argument("next_int: empty range");
  const std::uint64_t span =
      static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(next_u64());  // full 64-bit range
  const std::uint64_t reject_above = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t draw;
  do {
    draw = next_u64();
  } while (draw >= reject_above);
  return lo + static_cast<std::int64_t>(draw % span);
}

double SplitMix64::next_gaussian() {
  if (have_cached_) {
    have_cached_ = false;
    return cached_;
  }
  // u1 in (0, 1] keeps the log finite.
  const double u1 = 1.0 - next_double();
  const double u2 = next_double();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = radius * std::sin(angle);
  have_cached_ = true;
  return radius * std::cos(angle);
}

std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stage,
                            std::uint64_t item) {
  std::uint64_t z = splitmix_mix(seed + 0x9E3779B97F4A7C15ull);
  z = splitmix_mix(z + stage);
  z = splitmix_mix(z + item);
  return z;
}

}  // namespace l3s3tv
