#include "core/noisegen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <numeric>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace l3s3tv {

namespace {

// Substream stage tags (normative, part of the reproducibility contract).
enum Stage : std::uint64_t {
  stage_gaussian = 1,
  stage_snr_target = 2,
  stage_snr_noise = 3,
  stage_deadline = 4,
  stage_stripe = 5,
  stage_impulse = 6,
  stage_impulse_density = 7,
  stage_case_step = 8,
};

std::string format_line(const char* fmt, ...) {
  char buf[256];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return buf;
}

// First k entries of a seeded partial Fisher-Yates shuffle of 0..n-1.
std::vector<Index> sample_distinct(Index n, Index k, SplitMix64& rng) {
  std::vector<Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index i = 0; i < k; ++i) {
    const Index j = i + static_cast<Index>(rng.next_int(0, n - 1 - i));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(k));
  return pool;
}

void check_range(IntRange r, const char* what) {
  if (r.lo > r.hi || r.lo < 0) fail_argument(std::string(what) + ": bad range");
}

}  // namespace

std::string NoiseReport::text() const {
  std::string out;
  for (const std::string& line : lines) {
    out += line;
    out += '\n';
  }
  return out;
}

BandRange scale_band_range(BandRange range, Index bands, Index reference_bands) {
  if (range.lo < 1 || range.lo > range.hi) fail_argument("bad band range");
  if (bands >= reference_bands) return range;
  const auto scale = [&](std::int64_t v) {
    const auto mapped = static_cast<std::int64_t>(std::llround(
        static_cast<double>(v) * static_cast<double>(bands) /
        static_cast<double>(reference_bands)));
    return std::clamp<std::int64_t>(mapped, 1, bands);
  };
  BandRange out{scale(range.lo), scale(range.hi)};
  if (out.lo > out.hi) out.hi = out.lo;
  return out;
}

HsiCube add_gaussian(const HsiCube& cube, double sigma, std::uint64_t seed) {
  if (sigma < 0.0 || !std::isfinite(sigma)) fail_argument("add_gaussian: bad sigma");
  HsiCube out = cube;
  if (sigma == 0.0) return out;
  for (Index b = 0; b < out.bands(); ++b) {
    SplitMix64 rng(derive_stream(seed, stage_gaussian, static_cast<std::uint64_t>(b)));
    double* band = out.band_data(b);
    for (Index k = 0; k < out.band_size(); ++k) band[k] += sigma * rng.next_gaussian();
  }
  return out;
}

SnrResult add_gaussian_snr(const HsiCube& cube, double lo_db, double hi_db,
                           std::uint64_t seed, NoiseReport* report) {
  if (!(lo_db <= hi_db)) fail_argument("add_gaussian_snr: empty range");
  SnrResult result{cube, {}};
  result.snr_db.resize(static_cast<std::size_t>(cube.bands()));
  for (Index b = 0; b < cube.bands(); ++b) {
    const double power = cube.band_array(b).square().mean();
    if (power <= 0.0) {
      result.snr_db[static_cast<std::size_t>(b)] =
          std::numeric_limits<double>::quiet_NaN();
      if (report) report->add(format_line("snr band=%lld zero_power", static_cast<long long>(b + 1)));
      continue;
    }
    SplitMix64 target_rng(
        derive_stream(seed, stage_snr_target, static_cast<std::uint64_t>(b)));
    const double snr = target_rng.next_uniform(lo_db, hi_db);
    const double variance = power / std::pow(10.0, snr / 10.0);
    const double sigma = std::sqrt(variance);
    SplitMix64 noise_rng(
        derive_stream(seed, stage_snr_noise, static_cast<std::uint64_t>(b)));
    double* band = result.cube.band_data(b);
    for (Index k = 0; k < cube.band_size(); ++k) band[k] += sigma * noise_rng.next_gaussian();
    result.snr_db[static_cast<std::size_t>(b)] = snr;
    if (report) {
      report->add(format_line("snr band=%lld target_db=%.6g variance=%.6g",
                              static_cast<long long>(b + 1), snr, variance));
    }
  }
  return result;
}

HsiCube add_deadlines(const HsiCube& cube, BandRange bands, IntRange count,
                      IntRange width, std::uint64_t seed, NoiseReport* report) {
  check_range(count, "deadline count");
  check_range(width, "deadline width");
  if (width.lo < 1) fail_argument("deadline width must be >= 1");
  const BandRange range = scale_band_range(bands, cube.bands());
  if (report) {
    report->add(format_line("deadline bands=%lld..%lld", static_cast<long long>(range.lo),
                            static_cast<long long>(range.hi)));
  }
  HsiCube out = cube;
  const Index N = cube.cols();
  for (std::int64_t band1 = range.lo; band1 <= range.hi; ++band1) {
    const Index b = static_cast<Index>(band1 - 1);
    SplitMix64 rng(derive_stream(seed, stage_deadline, static_cast<std::uint64_t>(b)));
    const std::int64_t n_dead = rng.next_int(count.lo, count.hi);
    for (std::int64_t d = 0; d < n_dead; ++d) {
      const Index w = std::min<Index>(static_cast<Index>(rng.next_int(width.lo, width.hi)), N);
      const Index pos = static_cast<Index>(rng.next_int(0, N - w));
      for (Index j = pos; j < pos + w; ++j) {
        for (Index i = 0; i < cube.rows(); ++i) out.at(i, j, b) = 0.0;
      }
      if (report) {
        report->add(format_line("deadline band=%lld col=%lld width=%lld",
                                static_cast<long long>(band1), static_cast<long long>(pos),
                                static_cast<long long>(w)));
      }
    }
  }
  return out;
}

HsiCube add_stripes(const HsiCube& cube, BandRange bands, IntRange count,
                    double value_lo, double value_hi, std::uint64_t seed,
                    NoiseReport* report) {
  check_range(count, "stripe count");
  if (!(value_lo <= value_hi)) fail_argument("stripe value range empty");
  const BandRange range = scale_band_range(bands, cube.bands());
  if (report) {
    report->add(format_line("stripe bands=%lld..%lld", static_cast<long long>(range.lo),
                            static_cast<long long>(range.hi)));
  }
  HsiCube out = cube;
  const Index N = cube.cols();
  for (std::int64_t band1 = range.lo; band1 <= range.hi; ++band1) {
    const Index b = static_cast<Index>(band1 - 1);
    SplitMix64 rng(derive_stream(seed, stage_stripe, static_cast<std::uint64_t>(b)));
    const Index n_cols = std::min<Index>(static_cast<Index>(rng.next_int(count.lo, count.hi)), N);
    const std::vector<Index> cols = sample_distinct(N, n_cols, rng);
    for (Index j : cols) {
      const double value = rng.next_uniform(value_lo, value_hi);
      for (Index i = 0; i < cube.rows(); ++i) out.at(i, j, b) += value;
      if (report) {
        report->add(format_line("stripe band=%lld col=%lld value=%.6g",
                                static_cast<long long>(band1), static_cast<long long>(j),
                                value));
      }
    }
  }
  return out;
}

namespace {

void impulse_band(HsiCube& cube, Index b, double density, SplitMix64& rng,
                  NoiseReport* report) {
  const Index total = cube.band_size();
  const Index k = static_cast<Index>(std::floor(density * static_cast<double>(total)));
  if (k <= 0) return;
  const std::vector<Index> picks = sample_distinct(total, k, rng);
  double* band = cube.band_data(b);
  for (Index idx : picks) band[idx] = rng.next_double() < 0.5 ? 0.0 : 1.0;
  if (report) {
    report->add(format_line("impulse band=%lld density=%.6g corrupted=%lld",
                            static_cast<long long>(b + 1), density,
                            static_cast<long long>(k)));
  }
}

}  // namespace

HsiCube add_impulse(const HsiCube& cube, double density, std::uint64_t seed,
                    NoiseReport* report) {
  if (density < 0.0 || density > 1.0 || !std::isfinite(density)) {
    fail_argument("add_impulse: density must be in [0,1]");
  }
  HsiCube out = cube;
  for (Index b = 0; b < cube.bands(); ++b) {
    SplitMix64 rng(derive_stream(seed, stage_impulse, static_cast<std::uint64_t>(b)));
    impulse_band(out, b, density, rng, report);
  }
  return out;
}

HsiCube add_impulse_banded(const HsiCube& cube, double density_lo, double density_hi,
                           std::uint64_t seed, NoiseReport* report) {
  if (!(0.0 <= density_lo && density_lo <= density_hi && density_hi <= 1.0)) {
    fail_argument("add_impulse_banded: bad density range");
  }
  HsiCube out = cube;
  for (Index b = 0; b < cube.bands(); ++b) {
    SplitMix64 density_rng(
        derive_stream(seed, stage_impulse_density, static_cast<std::uint64_t>(b)));
    const double density = density_rng.next_uniform(density_lo, density_hi);
    SplitMix64 rng(derive_stream(seed, stage_impulse, static_cast<std::uint64_t>(b)));
    impulse_band(out, b, density, rng, report);
  }
  return out;
}

void NoiseSpec::validate() const {
  if (case_id < 1 || case_id > 6) {
    fail_argument("noise case must be 1..6, got " + std::to_string(case_id));
  }
  if (gaussian_variance.has_value() &&
      (*gaussian_variance < 0.0 || !std::isfinite(*gaussian_variance))) {
    fail_argument("gaussian variance must be nonnegative");
  }
  if (!(resolved_snr_low() <= resolved_snr_high())) fail_argument("snr range empty");
  check_range(deadline_count, "deadline count");
  check_range(deadline_width, "deadline width");
  check_range(stripe_count, "stripe count");
  if (!(stripe_value_low <= stripe_value_high)) fail_argument("stripe value range empty");
  if (impulse_density < 0.0 || impulse_density > 1.0) {
    fail_argument("impulse density must be in [0,1]");
  }
  if (!(0.0 <= impulse_extra_low && impulse_extra_low <= impulse_extra_high &&
        impulse_extra_high <= 1.0)) {
    fail_argument("impulse extra density range invalid");
  }
}

double NoiseSpec::resolved_sigma() const {
  const double value = gaussian_variance.value_or(case_id == 3 ? 0.14 : 0.1);
  return variance_as_sigma ? value : std::sqrt(value);
}

double NoiseSpec::resolved_snr_low() const {
  return snr_low_db.value_or(case_id == 6 ? 45.0 : 15.0);
}

double NoiseSpec::resolved_snr_high() const {
  return snr_high_db.value_or(case_id == 6 ? 55.0 : 25.0);
}

NoiseSpec case_defaults(int case_id, std::uint64_t seed) {
  if (case_id < 1 || case_id > 6) {
    fail_argument("noise case must be 1..6, got " + std::to_string(case_id));
  }
  NoiseSpec spec;
  spec.case_id = case_id;
  spec.seed = seed;
  return spec;
}

HsiCube make_case(const HsiCube& clean, const NoiseSpec& spec, NoiseReport* report) {
  spec.validate();
  if (clean.empty()) fail_argument("make_case: empty cube");
  const auto step_seed = [&](std::uint64_t step) {
    return derive_stream(spec.seed, stage_case_step, step);
  };
  const double sigma = spec.resolved_sigma();
  if (report) {
    report->add(format_line("case=%d seed=%llu", spec.case_id,
                            static_cast<unsigned long long>(spec.seed)));
    if (spec.case_id <= 4) report->add(format_line("gaussian sigma=%.6g", sigma));
  }
  HsiCube out = clean;
  switch (spec.case_id) {
    case 1:
      out = add_gaussian(out, sigma, step_seed(0));
      break;
    case 2:
      out = add_gaussian(out, sigma, step_seed(0));
      out = add_deadlines(out, spec.deadline_bands, spec.deadline_count,
                          spec.deadline_width, step_seed(1), report);
      break;
    case 3:
      out = add_gaussian(out, sigma, step_seed(0));
      out = add_stripes(out, spec.stripe_bands, spec.stripe_count,
                        spec.stripe_value_low, spec.stripe_value_high, step_seed(1),
                        report);
      break;
    case 4:
      out = add_gaussian(out, sigma, step_seed(0));
      out = add_deadlines(out, spec.deadline_bands, spec.deadline_count,
                          spec.deadline_width, step_seed(1), report);
      out = add_stripes(out, spec.stripe_bands, spec.stripe_count,
                        spec.stripe_value_low, spec.stripe_value_high, step_seed(2),
                        report);
      break;
    case 5:
    case 6: {
      SnrResult snr = add_gaussian_snr(out, spec.resolved_snr_low(),
                                       spec.resolved_snr_high(), step_seed(0), report);
      out = std::move(snr.cube);
      out = add_impulse(out, spec.impulse_density, step_seed(1), report);
      out = add_impulse_banded(out, spec.impulse_extra_low, spec.impulse_extra_high,
                               step_seed(2), report);
      break;
    }
    default:
      fail_argument("noise case must be 1..6");
  }
  if (spec.clip) out.array() = out.array().max(0.0).min(1.0);
  return out;
}

}  // namespace l3s3tv
