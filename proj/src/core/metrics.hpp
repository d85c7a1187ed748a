#pragma once

#include <vector>

#include "core/cube.hpp"

namespace l3s3tv {

// Per-band quality numbers plus their aggregates. mpsnr/mssim are exact
// means of the per-band lists; identical inputs give the +infinity PSNR
// sentinel, SSIM 1 and ERGAS 0.
struct MetricsReport {
  std::vector<double> per_band_psnr;
  std::vector<double> per_band_ssim;
  double mpsnr = 0.0;
  double mssim = 0.0;
  double ergas = 0.0;
  // Bands skipped by the ERGAS sum because the reference mean is zero.
  Index ergas_excluded_bands = 0;
};

// 10*log10(1 / MSE) with peak fixed at 1; +infinity when the bands match.
double psnr_band(const HsiCube& reference, const HsiCube& test, Index band);

// Mean local SSIM, 11x11 Gaussian window (sigma 1.5), K1=0.01, K2=0.03,
// dynamic range 1. Windows are truncated and renormalized at borders, so
// any band size works.
double ssim_band(const HsiCube& reference, const HsiCube& test, Index band);

// 100*sqrt(mean over included bands of (RMSE_b / mean_b)^2). Bands whose
// reference mean is zero are excluded; at least one band must remain.
double ergas(const HsiCube& reference, const HsiCube& test,
             Index* excluded_bands = nullptr);

// The p values at one pixel across bands, in band order.
std::vector<double> spectral_signature(const HsiCube& cube, Index row, Index col);

MetricsReport compute_metrics(const HsiCube& reference, const HsiCube& test);

}  // namespace l3s3tv
