#include "core/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "core/errors.hpp"

namespace l3s3tv {

namespace {

void check_pair(const HsiCube& reference, const HsiCube& test, Index band = 0) {
  if (!reference.same_shape(test)) fail_argument("metrics: cubes differ in shape");
  if (band < 0 || band >= reference.bands()) fail_argument("metrics: band out of range");
  if (!reference.all_finite() || !test.all_finite()) {
    fail(Status::numeric_failure, "metrics: non-finite values");
  }
}

constexpr int kWindowRadius = 5;  // 11x11
constexpr double kWindowSigma = 1.5;
constexpr double kC1 = 0.01 * 0.01;  // (K1*L)^2, L = 1
constexpr double kC2 = 0.03 * 0.03;  // (K2*L)^2

const std::array<double, 2 * kWindowRadius + 1>& window_taps() {
  static const auto taps = [] {
    std::array<double, 2 * kWindowRadius + 1> t{};
    for (int d = -kWindowRadius; d <= kWindowRadius; ++d) {
      t[static_cast<std::size_t>(d + kWindowRadius)] =
          std::exp(-static_cast<double>(d * d) / (2.0 * kWindowSigma * kWindowSigma));
    }
    return t;
  }();
  return taps;
}

}  // namespace

double psnr_band(const HsiCube& reference, const HsiCube& test, Index band) {
  check_pair(reference, test, band);
  const double mse =
      (reference.band_array(band) - test.band_array(band)).square().mean();
  if (mse <= 0.0) return std::numeric_limits<double>::infinity();
  return -10.0 * std::log10(mse);
}

double ssim_band(const HsiCube& reference, const HsiCube& test, Index band) {
  check_pair(reference, test, band);
  const Index M = reference.rows(), N = reference.cols();
  const auto& taps = window_taps();
  double total = 0.0;
  for (Index ci = 0; ci < M; ++ci) {
    const Index i_lo = std::max<Index>(0, ci - kWindowRadius);
    const Index i_hi = std::min<Index>(M - 1, ci + kWindowRadius);
    for (Index cj = 0; cj < N; ++cj) {
      const Index j_lo = std::max<Index>(0, cj - kWindowRadius);
      const Index j_hi = std::min<Index>(N - 1, cj + kWindowRadius);
      double wsum = 0.0, mx = 0.0, my = 0.0, mxx = 0.0, myy = 0.0, mxy = 0.0;
      for (Index i = i_lo; i <= i_hi; ++i) {
        const double wi = taps[static_cast<std::size_t>(i - ci + kWindowRadius)];
        for (Index j = j_lo; j <= j_hi; ++j) {
          const double w =
              wi * taps[static_cast<std::size_t>(j - cj + kWindowRadius)];
          const double x = reference.at(i, j, band);
          const double y = test.at(i, j, band);
          wsum += w;
          mx += w * x;
          my += w * y;
          mxx += w * x * x;
          myy += w * y * y;
          mxy += w * x * y;
        }
      }
      mx /= wsum;
      my /= wsum;
      const double vx = mxx / wsum - mx * mx;
      const double vy = myy / wsum - my * my;
      const double cov = mxy / wsum - mx * my;
      total += ((2.0 * mx * my + kC1) * (2.0 * cov + kC2)) /
               ((mx * mx + my * my + kC1) * (vx + vy + kC2));
    }
  }
  return total / static_cast<double>(M * N);
}

double ergas(const HsiCube& reference, const HsiCube& test, Index* excluded_bands) {
  check_pair(reference, test);
  double sum = 0.0;
  Index included = 0, excluded = 0;
  for (Index b = 0; b < reference.bands(); ++b) {
    const double mean = reference.band_array(b).mean();
    if (mean == 0.0) {
      ++excluded;
      continue;
    }
    const double mse =
        (reference.band_array(b) - test.band_array(b)).square().mean();
    const double ratio = std::sqrt(mse) / mean;
    sum += ratio * ratio;
    ++included;
  }
  if (excluded_bands != nullptr) *excluded_bands = excluded;
  if (included == 0) fail_argument("ergas: every reference band has zero mean");
  return 100.0 * std::sqrt(sum / static_cast<double>(included));
}

std::vector<double> spectral_signature(const HsiCube& cube, Index row, Index col) {
  if (row < 0 || row >= cube.rows() || col < 0 || col >= cube.cols()) {
    fail_argument("spectral_signature: pixel out of bounds");
  }
  std::vector<double> out(static_cast<std::size_t>(cube.bands()));
  for (Index b = 0; b < cube.bands(); ++b) out[static_cast<std::size_t>(b)] = cube.at(row, col, b);
  return out;
}

MetricsReport compute_metrics(const HsiCube& reference, const HsiCube& test) {
  check_pair(reference, test);
  MetricsReport report;
  const Index p = reference.bands();
  report.per_band_psnr.resize(static_cast<std::size_t>(p));
  report.per_band_ssim.resize(static_cast<std::size_t>(p));
  double psnr_sum = 0.0, ssim_sum = 0.0;
  for (Index b = 0; b < p; ++b) {
    const double psnr = psnr_band(reference, test, b);
    const double ssim = ssim_band(reference, test, b);
    report.per_band_psnr[static_cast<std::size_t>(b)] = psnr;
    report.per_band_ssim[static_cast<std::size_t>(b)] = ssim;
    psnr_sum += psnr;
    ssim_sum += ssim;
  }
  report.mpsnr = psnr_sum / static_cast<double>(p);
  report.mssim = ssim_sum / static_cast<double>(p);
  report.ergas = ergas(reference, test, &report.ergas_excluded_bands);
  return report;
}

}  // namespace l3s3tv
