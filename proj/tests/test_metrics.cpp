#include <cmath>
#include <limits>

#include "core/metrics.hpp"
#include "core/rng.hpp"
#include "doctest.h"

using namespace l3s3tv;

namespace {

HsiCube random_cube(Index rows, Index cols, Index bands, std::uint64_t seed,
                    double lo = 0.0, double hi = 1.0) {
  SplitMix64 rng(seed);
  HsiCube cube(rows, cols, bands);
  for (Index k = 0; k < cube.size(); ++k) cube.data()[k] = rng.next_uniform(lo, hi);
  return cube;
}

}  // namespace

TEST_CASE("psnr_band pinned values") {
  HsiCube ref = random_cube(8, 8, 1, 41);
  CHECK(psnr_band(ref, ref, 0) == std::numeric_limits<double>::infinity());

  HsiCube shifted = ref;
  shifted.array() += 0.1;  // MSE 0.01 -> 20 dB
  CHECK(psnr_band(ref, shifted, 0) == doctest::Approx(20.0));

  HsiCube shifted2 = ref;
  shifted2.array() += 0.1 * std::sqrt(2.0);  // doubles the MSE
  CHECK(psnr_band(ref, shifted, 0) - psnr_band(ref, shifted2, 0) ==
        doctest::Approx(10.0 * std::log10(2.0)).epsilon(1e-9));
}

TEST_CASE("ssim_band pinned values") {
  HsiCube ref = random_cube(16, 16, 1, 42);
  CHECK(ssim_band(ref, ref, 0) == doctest::Approx(1.0));

  // Contrast-reversed copy: structure term flips, SSIM drops below 1.
  const double mean = ref.band_array(0).mean();
  HsiCube flipped = ref;
  flipped.band_array(0) = 2.0 * mean - ref.band_array(0);
  CHECK(ssim_band(ref, flipped, 0) < 0.0);

  // Constant vs constant: variance terms vanish and the closed form is
  // (2 c (c+d) + C1) / (c^2 + (c+d)^2 + C1).
  const double c = 0.5, d = 0.2, C1 = 0.01 * 0.01;
  HsiCube a(9, 9, 1, c), b(9, 9, 1, c + d);
  const double expected = (2.0 * c * (c + d) + C1) / (c * c + (c + d) * (c + d) + C1);
  CHECK(ssim_band(a, b, 0) == doctest::Approx(expected).epsilon(1e-10));

  // Bands smaller than the 11x11 window still work (truncated windows).
  HsiCube tiny_ref = random_cube(3, 3, 1, 43);
  CHECK(ssim_band(tiny_ref, tiny_ref, 0) == doctest::Approx(1.0));
}

TEST_CASE("ergas pinned values and exclusion rule") {
  HsiCube ref = random_cube(10, 10, 3, 44, 0.2, 1.0);
  CHECK(ergas(ref, ref) == doctest::Approx(0.0));

  // Single band with RMSE equal to its mean scores exactly 100.
  HsiCube flat(4, 4, 1, 0.5);
  HsiCube off = flat;
  off.array() += 0.5;  // RMSE 0.5 = mean 0.5
  CHECK(ergas(flat, off) == doctest::Approx(100.0));

  // Noise strictly increases ERGAS.
  HsiCube noisy = ref;
  SplitMix64 rng(45);
  for (Index k = 0; k < noisy.size(); ++k)
    noisy.data()[k] += 0.05 * rng.next_gaussian();
  CHECK(ergas(ref, noisy) > 0.0);

  // Scaling both cubes together leaves ERGAS unchanged.
  HsiCube ref_scaled = ref, noisy_scaled = noisy;
  ref_scaled.array() *= 3.0;
  noisy_scaled.array() *= 3.0;
  CHECK(ergas(ref_scaled, noisy_scaled) ==
        doctest::Approx(ergas(ref, noisy)).epsilon(1e-10));

  // Zero-mean reference bands are excluded and counted.
  HsiCube with_zero(4, 4, 2, 0.0);
  with_zero.band_array(1) = 0.5;
  HsiCube test_cube = with_zero;
  test_cube.array() += 0.1;
  Index excluded = 0;
  const double value = ergas(with_zero, test_cube, &excluded);
  CHECK(excluded == 1);
  CHECK(value == doctest::Approx(100.0 * (0.1 / 0.5)));

  HsiCube all_zero(4, 4, 1, 0.0);
  CHECK_THROWS_AS((void)ergas(all_zero, all_zero), Error);
}

TEST_CASE("spectral_signature reads one pixel across bands") {
  HsiCube constant(3, 3, 4, 0.25);
  std::vector<double> sig = spectral_signature(constant, 1, 2);
  REQUIRE(sig.size() == 4);
  for (double v : sig) CHECK(v == 0.25);

  HsiCube delta(3, 3, 4, 0.0);
  delta.at(2, 1, 3) = 1.0;
  std::vector<double> hit = spectral_signature(delta, 2, 1);
  CHECK(hit[3] == 1.0);
  CHECK(hit[0] == 0.0);
  std::vector<double> miss = spectral_signature(delta, 0, 0);
  for (double v : miss) CHECK(v == 0.0);

  HsiCube cube = random_cube(4, 5, 3, 46);
  std::vector<double> sig2 = spectral_signature(cube, 3, 4);
  for (Index b = 0; b < 3; ++b)
    CHECK(sig2[static_cast<std::size_t>(b)] == cube.at(3, 4, b));

  CHECK_THROWS_AS((void)spectral_signature(cube, 4, 0), Error);
  CHECK_THROWS_AS((void)spectral_signature(cube, 0, 5), Error);
}

TEST_CASE("compute_metrics aggregates exact per-band means") {
  HsiCube ref = random_cube(12, 12, 4, 47);
  HsiCube test_cube = ref;
  SplitMix64 rng(48);
  for (Index k = 0; k < test_cube.size(); ++k)
    test_cube.data()[k] += 0.02 * rng.next_gaussian();

  MetricsReport report = compute_metrics(ref, test_cube);
  REQUIRE(report.per_band_psnr.size() == 4);
  REQUIRE(report.per_band_ssim.size() == 4);
  double mp = 0.0, ms = 0.0;
  for (Index b = 0; b < 4; ++b) {
    CHECK(report.per_band_psnr[static_cast<std::size_t>(b)] ==
          doctest::Approx(psnr_band(ref, test_cube, b)));
    CHECK(report.per_band_ssim[static_cast<std::size_t>(b)] ==
          doctest::Approx(ssim_band(ref, test_cube, b)));
    mp += report.per_band_psnr[static_cast<std::size_t>(b)];
    ms += report.per_band_ssim[static_cast<std::size_t>(b)];
  }
  CHECK(report.mpsnr == doctest::Approx(mp / 4.0));
  CHECK(report.mssim == doctest::Approx(ms / 4.0));
  CHECK(report.ergas == doctest::Approx(ergas(ref, test_cube)));

  HsiCube wrong(2, 2, 2, 0.0);
  CHECK_THROWS_AS((void)compute_metrics(ref, wrong), Error);
}
