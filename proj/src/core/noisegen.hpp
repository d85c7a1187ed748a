#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/cube.hpp"

namespace l3s3tv {

// Realized noise parameters (scaled band ranges, per-band SNRs, stripe
// columns, ...) collected while generating, one line per event.
struct NoiseReport {
  std::vector<std::string> lines;

  void add(std::string line) { lines.push_back(std::move(line)); }
  std::string text() const;
};

struct IntRange {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
};

// 1-indexed inclusive band interval, expressed at the 224-band scale of the
// reference sensor. Cubes with fewer bands get the interval rescaled
// proportionally (see scale_band_range).
struct BandRange {
  std::int64_t lo = 1;
  std::int64_t hi = 1;
};

// Proportional mapping of a reference-scale interval onto a cube with
// `bands` bands; identity when bands >= reference.
BandRange scale_band_range(BandRange range, Index bands,
                           Index reference_bands = 224);

// i.i.d. zero-mean Gaussian with standard deviation sigma on every element.
HsiCube add_gaussian(const HsiCube& cube, double sigma, std::uint64_t seed);

struct SnrResult {
  HsiCube cube;
  // Target SNR per band in dB; NaN for zero-power bands (left unchanged).
  std::vector<double> snr_db;
};

// Per band: draw a target SNR uniformly in [lo_db, hi_db] and add Gaussian
// noise with variance (band power) / 10^(SNR/10).
SnrResult add_gaussian_snr(const HsiCube& cube, double lo_db, double hi_db,
                           std::uint64_t seed, NoiseReport* report = nullptr);

// Per band in `bands`: draw a deadline count, then per deadline a width and
// a position; the covered pixel columns of that band are zeroed.
HsiCube add_deadlines(const HsiCube& cube, BandRange bands, IntRange count,
                      IntRange width, std::uint64_t seed,
                      NoiseReport* report = nullptr);

// Per band in `bands`: draw a column count (clamped to N), pick that many
// distinct columns, and add one uniformly drawn constant per column.
HsiCube add_stripes(const HsiCube& cube, BandRange bands, IntRange count,
                    double value_lo, double value_hi, std::uint64_t seed,
                    NoiseReport* report = nullptr);

// Salt-and-pepper: per band, floor(density*M*N) distinct pixels each become
// 0 or 1 with equal probability.
HsiCube add_impulse(const HsiCube& cube, double density, std::uint64_t seed,
                    NoiseReport* report = nullptr);

// Same, with the density drawn per band uniformly in [density_lo, density_hi].
HsiCube add_impulse_banded(const HsiCube& cube, double density_lo,
                           double density_hi, std::uint64_t seed,
                           NoiseReport* report = nullptr);

// One of the six synthetic corruption protocols plus its knobs. Defaults
// come from case_defaults; every knob can be overridden before make_case.
struct NoiseSpec {
  int case_id = 1;
  std::uint64_t seed = 0;
  // Gaussian noise level for cases 1-4; empty means the per-case default
  // (0.14 for case 3, 0.1 otherwise). Read as a variance unless
  // variance_as_sigma is set.
  std::optional<double> gaussian_variance;
  bool variance_as_sigma = false;
  bool clip = false;  // clamp the result to [0,1]
  // SNR window for cases 5 and 6; empty means the per-case default
  // ([15,25] dB for case 5, [45,55] dB for case 6).
  std::optional<double> snr_low_db;
  std::optional<double> snr_high_db;
  BandRange deadline_bands{81, 120};
  IntRange deadline_count{3, 10};
  IntRange deadline_width{1, 3};
  BandRange stripe_bands{161, 190};
  IntRange stripe_count{20, 40};
  double stripe_value_low = -0.25;
  double stripe_value_high = 0.25;
  double impulse_density = 0.2;
  double impulse_extra_low = 0.0196;
  double impulse_extra_high = 0.0784;

  void validate() const;
  double resolved_sigma() const;
  double resolved_snr_low() const;
  double resolved_snr_high() const;
};

// Spec for one of the six cases with every knob at its default.
NoiseSpec case_defaults(int case_id, std::uint64_t seed);

// Case 1: Gaussian, variance 0.1.
// Case 2: case 1 plus deadlines in deadline_bands.
// Case 3: Gaussian, variance 0.14, plus stripes in stripe_bands.
// Case 4: case 2 plus the case-3 stripes.
// Case 5: per-band SNR in [15,25] dB, salt-and-pepper at 20%, then extra
//         salt-and-pepper at a per-band density in [0.0196, 0.0784].
// Case 6: per-band SNR in [45,55] dB plus the case-5 impulse steps.
HsiCube make_case(const HsiCube& clean, const NoiseSpec& spec,
                  NoiseReport* report = nullptr);

}  // namespace l3s3tv
