#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "core/errors.hpp"
#include "core/rng.hpp"
#include "doctest.h"

using namespace l3s3tv;

TEST_CASE("splitmix64 matches the published test vectors") {
  // First outputs for seed 0 are the reference values of the original
  // algorithm publication; pinning them makes the stream portable.
  SplitMix64 rng(0);
  CHECK(rng.next_u64() == 0xE220A8397B1DCDAFull);
  CHECK(rng.next_u64() == 0x6E789E6AA1B965F4ull);
  CHECK(rng.next_u64() == 0x06C45D188009454Full);

  SplitMix64 rng42(42);
  CHECK(rng42.next_u64() == 0xBDD732262FEB6E95ull);
  CHECK(rng42.next_u64() == 0x28EFE333B266F103ull);

  SplitMix64 rngbeef(0xDEADBEEFull);
  CHECK(rngbeef.next_u64() == 0x4ADFB90F68C9EB9Bull);
}

TEST_CASE("derive_stream is three chained mixes") {
  CHECK(derive_stream(7, 3, 11) == 0x09115B7CC7E797C0ull);
  CHECK(derive_stream(0, 1, 0) == 0x943AFB10D107F8FDull);

  // Recompute from the exposed mix to keep the rule itself pinned.
  const std::uint64_t seed = 12345, stage = 4, item = 99;
  std::uint64_t z = splitmix_mix(seed + 0x9E3779B97F4A7C15ull);
  z = splitmix_mix(z + stage);
  z = splitmix_mix(z + item);
  CHECK(derive_stream(seed, stage, item) == z);

  std::set<std::uint64_t> seen;
  for (std::uint64_t stage_tag = 0; stage_tag < 10; ++stage_tag)
    for (std::uint64_t idx = 0; idx < 100; ++idx)
      seen.insert(derive_stream(2024, stage_tag, idx));
  CHECK(seen.size() == 1000);  // distinct (stage, item) pairs, distinct streams
}

TEST_CASE("next_double lies in [0,1) with the right mean") {
  SplitMix64 rng(8);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.next_double();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // SE of the mean is 1/sqrt(12 n) ~ 9.1e-4; allow 5 SE.
  CHECK(std::abs(sum / n - 0.5) < 5.0 / std::sqrt(12.0 * n));
}

TEST_CASE("next_int is inclusive and covers the range") {
  SplitMix64 rng(9);
  std::vector<int> counts(6, 0);
  for (int i = 0; i < 6000; ++i) {
    const std::int64_t v = rng.next_int(-2, 3);
    REQUIRE(v >= -2);
    REQUIRE(v <= 3);
    ++counts[static_cast<std::size_t>(v + 2)];
  }
  for (int c : counts) CHECK(c > 800);  // ~1000 expected per value

  CHECK(rng.next_int(5, 5) == 5);
  CHECK_THROWS_AS((void)rng.next_int(3, 2), Error);
}

TEST_CASE("next_gaussian has standard moments") {
  SplitMix64 rng(10);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.next_gaussian();
    sum += g;
    sumsq += g * g;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean) < 5.0 / std::sqrt(static_cast<double>(n)));
  // Var of the sample variance of a normal is ~2/n.
  CHECK(std::abs(var - 1.0) < 5.0 * std::sqrt(2.0 / n));
}

TEST_CASE("identical seeds replay identical sequences") {
  SplitMix64 a(31415), b(31415);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  SplitMix64 c(31415), d(31416);
  bool any_diff = false;
  for (int i = 0; i < 10; ++i) any_diff |= (c.next_u64() != d.next_u64());
  CHECK(any_diff);
}
