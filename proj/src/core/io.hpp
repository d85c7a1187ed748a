#pragma once

#include <string>

#include "core/cube.hpp"
#include "core/metrics.hpp"
#include "core/noisegen.hpp"
#include "core/solver.hpp"

namespace l3s3tv {

// Cube container format: one text header line
//   HSIC1 <rows> <cols> <bands> f32\n
// followed by little-endian IEEE-754 float32 values, band-sequential,
// row-major within a band. Values are widened to double on read.
HsiCube read_cube(const std::string& path);
void write_cube(const std::string& path, const HsiCube& cube);

// Everything a run needs, read from a flat "key = value" config file.
// Unknown and duplicate keys are rejected; serialization is canonical
// (fixed key order, shortest round-trip numbers), so parse -> serialize
// is idempotent.
struct RunConfig {
  SolverConfig solver;
  NoiseSpec noise;
  // Optional path to a reference cube; when set, the denoise trace carries
  // per-iteration quality metrics against it.
  std::string trace_reference;
};

RunConfig parse_config(const std::string& text);
std::string serialize_config(const RunConfig& config);
RunConfig read_config(const std::string& path);

// One "key = value" assignment against the same key table as parse_config.
// Invariants spanning several keys are checked when the config is used, not
// here, so keys can be set in any order.
void set_config_key(RunConfig& config, const std::string& key,
                    const std::string& value);

// Shortest decimal string that round-trips the value.
std::string format_double(double value);

// Iteration trace: '#'-prefixed metadata lines, then a CSV table of
// residuals (plus metric columns when a reference was supplied).
std::string format_trace(const DenoiseResult& result);

// Evaluation report: aggregate key-value lines, a per-band CSV table, and
// optionally the spectral signatures of one pixel (skipped when row < 0).
std::string format_evaluation(const MetricsReport& report, const HsiCube& reference,
                              const HsiCube& test, Index signature_row,
                              Index signature_col);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace l3s3tv
