#pragma once

#include <cstdint>

namespace l3s3tv {

// Portable 64-bit generator (SplitMix64). Pinned by algorithm, not by
// library, so seeded outputs are bit-identical across platforms and across
// reimplementations in other languages:
//   state += 0x9E3779B97F4A7C15
//   z = state; z = (z ^ z>>30) * 0xBF58476D1CE4E5B9
//   z = (z ^ z>>27) * 0x94D049BB133111EB; return z ^ z>>31
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  // Uniform in [0, 1), 53 random bits.
  double next_double();

  double next_uniform(double lo, double hi);

  // Inclusive on both ends, unbiased via rejection.
  std::int64_t next_int(std::int64_t lo, std::int64_t hi);

  // Standard normal via Box-Muller; the paired value is cached.
  double next_gaussian();

 private:
  std::uint64_t state_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

// The SplitMix64 output mix as a standalone bijection.
std::uint64_t splitmix_mix(std::uint64_t z);

// Substream derivation rule (normative for reproducibility): three chained
// mixes folding in the master seed, a stage tag, and an item index, so
// distinct (stage, item) pairs get independent streams and per-item
// generation order never matters.
std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stage,
                            std::uint64_t item);

}  // namespace l3s3tv
