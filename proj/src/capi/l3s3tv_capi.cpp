#include "l3s3tv/l3s3tv.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "core/cube.hpp"
#include "core/errors.hpp"
#include "core/io.hpp"
#include "core/metrics.hpp"
#include "core/noisegen.hpp"
#include "core/selfcheck.hpp"
#include "core/solver.hpp"

struct l3s3tv_cube {
  l3s3tv::HsiCube value;
};

struct l3s3tv_config {
  l3s3tv::RunConfig value;
};

namespace {

thread_local std::string g_last_error;

l3s3tv_status to_status(l3s3tv::Status status) {
  return static_cast<l3s3tv_status>(static_cast<int>(status));
}

// Runs fn, converting exceptions into status codes plus the thread-local
// message.
template <typename Fn>
l3s3tv_status guarded(Fn&& fn) {
  try {
    fn();
    return L3S3TV_OK;
  } catch (const l3s3tv::Error& e) {
    g_last_error = e.what();
    return to_status(e.status());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return L3S3TV_NUMERIC_FAILURE;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return L3S3TV_BAD_ARGUMENT;
  }
}

l3s3tv_status invalid(const char* message) {
  g_last_error = message;
  return L3S3TV_BAD_ARGUMENT;
}

char* copy_string(const std::string& text) {
  char* out = new char[text.size() + 1];
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

// Normalize -> solve -> denormalize pipeline shared by the C API and tests.
// The sparse estimate gets only the multiplicative part of the inverse map:
// it models an additive corruption, so the band offset stays with L.
void denoise_pipeline(const l3s3tv::HsiCube& noisy, const l3s3tv::RunConfig& config,
                      l3s3tv::HsiCube& denoised, l3s3tv::HsiCube& sparse,
                      l3s3tv::DenoiseResult& result) {
  auto [normalized, scale] = l3s3tv::normalize_bands(noisy);
  l3s3tv::HsiCube reference;
  const l3s3tv::HsiCube* reference_ptr = nullptr;
  if (!config.trace_reference.empty()) {
    reference = l3s3tv::read_cube(config.trace_reference);
    if (!reference.same_shape(noisy)) {
      l3s3tv::fail_argument("trace reference shape differs from input");
    }
    // Map the reference through the same affine transform as the input so
    // the per-iteration metrics live in the solver's domain.
    for (l3s3tv::Index b = 0; b < reference.bands(); ++b) {
      const auto [lo, hi] = scale.min_max[static_cast<std::size_t>(b)];
      if (hi > lo) {
        reference.band_array(b) = (reference.band_array(b) - lo) / (hi - lo);
      } else {
        reference.band_array(b).setZero();
      }
    }
    reference_ptr = &reference;
  }
  result = l3s3tv::run(normalized, config.solver, reference_ptr);
  denoised = l3s3tv::denormalize(result.denoised, scale);
  sparse = result.sparse;
  for (l3s3tv::Index b = 0; b < sparse.bands(); ++b) {
    const auto [lo, hi] = scale.min_max[static_cast<std::size_t>(b)];
    sparse.band_array(b) *= hi - lo;
  }
}

}  // namespace

extern "C" {

const char* l3s3tv_version(void) { return "0.1.0"; }

const char* l3s3tv_last_error(void) { return g_last_error.c_str(); }

void l3s3tv_string_free(char* text) { delete[] text; }

l3s3tv_status l3s3tv_cube_create(int64_t rows, int64_t cols, int64_t bands,
                                 l3s3tv_cube** out_cube) {
  if (out_cube == nullptr) return invalid("out_cube is null");
  *out_cube = nullptr;
  return guarded([&] {
    *out_cube = new l3s3tv_cube{l3s3tv::HsiCube(rows, cols, bands)};
  });
}

l3s3tv_status l3s3tv_cube_clone(const l3s3tv_cube* cube, l3s3tv_cube** out_cube) {
  if (cube == nullptr) return invalid("cube is null");
  if (out_cube == nullptr) return invalid("out_cube is null");
  *out_cube = nullptr;
  return guarded([&] { *out_cube = new l3s3tv_cube{cube->value}; });
}

l3s3tv_status l3s3tv_cube_read(const char* path, l3s3tv_cube** out_cube) {
  if (path == nullptr) return invalid("path is null");
  if (out_cube == nullptr) return invalid("out_cube is null");
  *out_cube = nullptr;
  return guarded([&] { *out_cube = new l3s3tv_cube{l3s3tv::read_cube(path)}; });
}

l3s3tv_status l3s3tv_cube_write(const l3s3tv_cube* cube, const char* path) {
  if (cube == nullptr) return invalid("cube is null");
  if (path == nullptr) return invalid("path is null");
  return guarded([&] { l3s3tv::write_cube(path, cube->value); });
}

int64_t l3s3tv_cube_rows(const l3s3tv_cube* cube) {
  return cube == nullptr ? 0 : cube->value.rows();
}

int64_t l3s3tv_cube_cols(const l3s3tv_cube* cube) {
  return cube == nullptr ? 0 : cube->value.cols();
}

int64_t l3s3tv_cube_bands(const l3s3tv_cube* cube) {
  return cube == nullptr ? 0 : cube->value.bands();
}

double* l3s3tv_cube_values(l3s3tv_cube* cube) {
  return cube == nullptr ? nullptr : cube->value.data();
}

const double* l3s3tv_cube_values_const(const l3s3tv_cube* cube) {
  return cube == nullptr ? nullptr : cube->value.data();
}

void l3s3tv_cube_free(l3s3tv_cube* cube) { delete cube; }

l3s3tv_status l3s3tv_config_create(l3s3tv_config** out_config) {
  if (out_config == nullptr) return invalid("out_config is null");
  *out_config = nullptr;
  return guarded([&] { *out_config = new l3s3tv_config{}; });
}

l3s3tv_status l3s3tv_config_read(const char* path, l3s3tv_config** out_config) {
  if (path == nullptr) return invalid("path is null");
  if (out_config == nullptr) return invalid("out_config is null");
  *out_config = nullptr;
  return guarded([&] {
    *out_config = new l3s3tv_config{l3s3tv::read_config(path)};
  });
}

l3s3tv_status l3s3tv_config_set(l3s3tv_config* config, const char* key,
                                const char* value) {
  if (config == nullptr) return invalid("config is null");
  if (key == nullptr || value == nullptr) return invalid("key/value is null");
  return guarded([&] { l3s3tv::set_config_key(config->value, key, value); });
}

l3s3tv_status l3s3tv_config_text(const l3s3tv_config* config, char** out_text) {
  if (config == nullptr) return invalid("config is null");
  if (out_text == nullptr) return invalid("out_text is null");
  *out_text = nullptr;
  return guarded([&] {
    *out_text = copy_string(l3s3tv::serialize_config(config->value));
  });
}

void l3s3tv_config_free(l3s3tv_config* config) { delete config; }

l3s3tv_status l3s3tv_simulate(const l3s3tv_cube* clean, int case_id, uint64_t seed,
                              const l3s3tv_config* config, l3s3tv_cube** out_noisy,
                              char** out_report) {
  if (clean == nullptr) return invalid("clean cube is null");
  if (out_noisy == nullptr) return invalid("out_noisy is null");
  *out_noisy = nullptr;
  if (out_report != nullptr) *out_report = nullptr;
  return guarded([&] {
    l3s3tv::NoiseSpec spec = config != nullptr
                                 ? config->value.noise
                                 : l3s3tv::case_defaults(case_id, seed);
    spec.case_id = case_id;
    spec.seed = seed;
    l3s3tv::NoiseReport report;
    l3s3tv::HsiCube noisy = l3s3tv::make_case(clean->value, spec, &report);
    *out_noisy = new l3s3tv_cube{std::move(noisy)};
    if (out_report != nullptr) *out_report = copy_string(report.text());
  });
}

l3s3tv_status l3s3tv_denoise(const l3s3tv_cube* noisy, const l3s3tv_config* config,
                             l3s3tv_cube** out_denoised, l3s3tv_cube** out_sparse,
                             char** out_trace, int* out_converged) {
  if (noisy == nullptr) return invalid("noisy cube is null");
  if (out_denoised == nullptr || out_sparse == nullptr) {
    return invalid("output cube pointers are null");
  }
  *out_denoised = nullptr;
  *out_sparse = nullptr;
  if (out_trace != nullptr) *out_trace = nullptr;
  return guarded([&] {
    const l3s3tv::RunConfig run_config =
        config != nullptr ? config->value : l3s3tv::RunConfig{};
    l3s3tv::HsiCube denoised, sparse;
    l3s3tv::DenoiseResult result;
    denoise_pipeline(noisy->value, run_config, denoised, sparse, result);
    *out_denoised = new l3s3tv_cube{std::move(denoised)};
    *out_sparse = new l3s3tv_cube{std::move(sparse)};
    if (out_trace != nullptr) *out_trace = copy_string(l3s3tv::format_trace(result));
    if (out_converged != nullptr) *out_converged = result.converged ? 1 : 0;
  });
}

l3s3tv_status l3s3tv_evaluate(const l3s3tv_cube* reference, const l3s3tv_cube* test,
                              int64_t signature_row, int64_t signature_col,
                              char** out_report, double* out_mpsnr,
                              double* out_mssim, double* out_ergas) {
  if (reference == nullptr || test == nullptr) return invalid("cube is null");
  if (out_report != nullptr) *out_report = nullptr;
  return guarded([&] {
    const l3s3tv::HsiCube& ref = reference->value;
    if (ref.array().minCoeff() < 0.0 || ref.array().maxCoeff() > 1.0) {
      l3s3tv::fail_argument("reference cube must lie in [0,1]");
    }
    const l3s3tv::MetricsReport report = l3s3tv::compute_metrics(ref, test->value);
    if (out_report != nullptr) {
      *out_report = copy_string(l3s3tv::format_evaluation(
          report, ref, test->value, signature_row, signature_col));
    }
    if (out_mpsnr != nullptr) *out_mpsnr = report.mpsnr;
    if (out_mssim != nullptr) *out_mssim = report.mssim;
    if (out_ergas != nullptr) *out_ergas = report.ergas;
  });
}

l3s3tv_status l3s3tv_selfcheck(int deep, char** out_report) {
  if (out_report != nullptr) *out_report = nullptr;
  try {
    const l3s3tv::SelfcheckReport report = l3s3tv::run_selfcheck(deep != 0);
    if (out_report != nullptr) *out_report = copy_string(report.text());
    if (!report.all_passed) {
      g_last_error = "selfcheck found failing checks";
      return L3S3TV_SELFCHECK_FAILURE;
    }
    return L3S3TV_OK;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return L3S3TV_SELFCHECK_FAILURE;
  }
}

}  // extern "C"
