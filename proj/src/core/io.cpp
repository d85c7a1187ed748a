#include "core/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

#include "core/errors.hpp"

namespace l3s3tv {

std::string format_double(double value) {
  std::array<char, 64> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double_value(const std::string& v, const std::string& key) {
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    fail_argument("config: bad number '" + v + "' for " + key);
  }
  return out;
}

std::int64_t parse_int_value(const std::string& v, const std::string& key) {
  std::int64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    fail_argument("config: bad integer '" + v + "' for " + key);
  }
  return out;
}

std::uint64_t parse_u64_value(const std::string& v, const std::string& key) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    fail_argument("config: bad unsigned integer '" + v + "' for " + key);
  }
  return out;
}

bool parse_bool_value(const std::string& v, const std::string& key) {
  if (v == "true") return true;
  if (v == "false") return false;
  fail_argument("config: expected true/false for " + key + ", got '" + v + "'");
}

struct KeyHandler {
  std::string key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

KeyHandler make_double(std::string key, std::function<double&(RunConfig&)> ref) {
  return {key,
          [ref](const RunConfig& c) { return format_double(ref(const_cast<RunConfig&>(c))); },
          [ref, key](RunConfig& c, const std::string& v) { ref(c) = parse_double_value(v, key); }};
}

template <typename Int>
KeyHandler make_int(std::string key, std::function<Int&(RunConfig&)> ref) {
  return {key,
          [ref](const RunConfig& c) {
            return std::to_string(
                static_cast<long long>(ref(const_cast<RunConfig&>(c))));
          },
          [ref, key](RunConfig& c, const std::string& v) {
            ref(c) = static_cast<Int>(parse_int_value(v, key));
          }};
}

// Optional doubles serialize as "auto" when unset.
KeyHandler make_optional_double(std::string key,
                                std::function<std::optional<double>&(RunConfig&)> ref) {
  return {key,
          [ref](const RunConfig& c) {
            const std::optional<double>& v = ref(const_cast<RunConfig&>(c));
            return v.has_value() ? format_double(*v) : std::string("auto");
          },
          [ref, key](RunConfig& c, const std::string& v) {
            if (v == "auto") {
              ref(c).reset();
            } else {
              ref(c) = parse_double_value(v, key);
            }
          }};
}

KeyHandler make_bool(std::string key, std::function<bool&(RunConfig&)> ref) {
  return {key,
          [ref](const RunConfig& c) {
            return ref(const_cast<RunConfig&>(c)) ? std::string("true")
                                                  : std::string("false");
          },
          [ref, key](RunConfig& c, const std::string& v) { ref(c) = parse_bool_value(v, key); }};
}

const char* mode_name(SolverMode mode) {
  switch (mode) {
    case SolverMode::l3s3tv: return "l3s3tv";
    case SolverMode::convex_rpca_sstv: return "convex_rpca_sstv";
    case SolverMode::l3s3_no_tv: return "l3s3_no_tv";
  }
  fail_argument("unknown solver mode");
}

SolverMode parse_mode(const std::string& v) {
  if (v == "l3s3tv") return SolverMode::l3s3tv;
  if (v == "convex_rpca_sstv") return SolverMode::convex_rpca_sstv;
  if (v == "l3s3_no_tv") return SolverMode::l3s3_no_tv;
  fail_argument("config: unknown solver.mode '" + v + "'");
}

const std::vector<KeyHandler>& key_handlers() {
  static const std::vector<KeyHandler> handlers = [] {
    std::vector<KeyHandler> h;
    h.push_back({"solver.mode",
                 [](const RunConfig& c) { return std::string(mode_name(c.solver.mode)); },
                 [](RunConfig& c, const std::string& v) { c.solver.mode = parse_mode(v); }});
    h.push_back(make_double("solver.lambda", [](RunConfig& c) -> double& { return c.solver.lambda; }));
    h.push_back(make_double("solver.gamma", [](RunConfig& c) -> double& { return c.solver.gamma; }));
    h.push_back(make_double("solver.rho0", [](RunConfig& c) -> double& { return c.solver.rho0; }));
    h.push_back(make_double("solver.rho_max", [](RunConfig& c) -> double& { return c.solver.rho_max; }));
    h.push_back(make_double("solver.kappa", [](RunConfig& c) -> double& { return c.solver.kappa; }));
    h.push_back(make_double("solver.epsilon", [](RunConfig& c) -> double& { return c.solver.epsilon; }));
    h.push_back(make_int<int>("solver.t_max", [](RunConfig& c) -> int& { return c.solver.t_max; }));
    h.push_back(make_int<Index>("solver.patch_rows", [](RunConfig& c) -> Index& { return c.solver.patch_rows; }));
    h.push_back(make_int<Index>("solver.patch_cols", [](RunConfig& c) -> Index& { return c.solver.patch_cols; }));
    h.push_back(make_int<Index>("solver.stride_rows", [](RunConfig& c) -> Index& { return c.solver.stride_rows; }));
    h.push_back(make_int<Index>("solver.stride_cols", [](RunConfig& c) -> Index& { return c.solver.stride_cols; }));
    h.push_back({"solver.l_anchor",
                 [](const RunConfig& c) {
                   return std::string(c.solver.l_anchor == LAnchor::midpoint ? "midpoint" : "sum");
                 },
                 [](RunConfig& c, const std::string& v) {
                   if (v == "midpoint") c.solver.l_anchor = LAnchor::midpoint;
                   else if (v == "sum") c.solver.l_anchor = LAnchor::sum;
                   else fail_argument("config: solver.l_anchor must be midpoint or sum");
                 }});
    h.push_back(make_int<int>("solver.threads", [](RunConfig& c) -> int& { return c.solver.threads; }));
    h.push_back(make_bool("solver.deterministic", [](RunConfig& c) -> bool& { return c.solver.deterministic; }));
    h.push_back(make_double("tv.tau_x", [](RunConfig& c) -> double& { return c.solver.weights.tau_x; }));
    h.push_back(make_double("tv.tau_y", [](RunConfig& c) -> double& { return c.solver.weights.tau_y; }));
    h.push_back(make_double("tv.tau_z", [](RunConfig& c) -> double& { return c.solver.weights.tau_z; }));
    h.push_back(make_int<int>("noise.case", [](RunConfig& c) -> int& { return c.noise.case_id; }));
    h.push_back({"noise.seed",
                 [](const RunConfig& c) { return std::to_string(c.noise.seed); },
                 [](RunConfig& c, const std::string& v) { c.noise.seed = parse_u64_value(v, "noise.seed"); }});
    h.push_back(make_optional_double("noise.variance", [](RunConfig& c) -> std::optional<double>& { return c.noise.gaussian_variance; }));
    h.push_back(make_bool("noise.variance_as_sigma", [](RunConfig& c) -> bool& { return c.noise.variance_as_sigma; }));
    h.push_back(make_bool("noise.clip", [](RunConfig& c) -> bool& { return c.noise.clip; }));
    h.push_back(make_optional_double("noise.snr_low_db", [](RunConfig& c) -> std::optional<double>& { return c.noise.snr_low_db; }));
    h.push_back(make_optional_double("noise.snr_high_db", [](RunConfig& c) -> std::optional<double>& { return c.noise.snr_high_db; }));
    h.push_back(make_int<std::int64_t>("noise.deadline_band_low", [](RunConfig& c) -> std::int64_t& { return c.noise.deadline_bands.lo; }));
    h.push_back(make_int<std::int64_t>("noise.deadline_band_high", [](RunConfig& c) -> std::int64_t& { return c.noise.deadline_bands.hi; }));
    h.push_back(make_int<std::int64_t>("noise.deadline_count_low", [](RunConfig& c) -> std::int64_t& { return c.noise.deadline_count.lo; }));
    h.push_back(make_int<std::int64_t>("noise.deadline_count_high", [](RunConfig& c) -> std::int64_t& { return c.noise.deadline_count.hi; }));
    h.push_back(make_int<std::int64_t>("noise.deadline_width_low", [](RunConfig& c) -> std::int64_t& { return c.noise.deadline_width.lo; }));
    h.push_back(make_int<std::int64_t>("noise.deadline_width_high", [](RunConfig& c) -> std::int64_t& { return c.noise.deadline_width.hi; }));
    h.push_back(make_int<std::int64_t>("noise.stripe_band_low", [](RunConfig& c) -> std::int64_t& { return c.noise.stripe_bands.lo; }));
    h.push_back(make_int<std::int64_t>("noise.stripe_band_high", [](RunConfig& c) -> std::int64_t& { return c.noise.stripe_bands.hi; }));
    h.push_back(make_int<std::int64_t>("noise.stripe_count_low", [](RunConfig& c) -> std::int64_t& { return c.noise.stripe_count.lo; }));
    h.push_back(make_int<std::int64_t>("noise.stripe_count_high", [](RunConfig& c) -> std::int64_t& { return c.noise.stripe_count.hi; }));
    h.push_back(make_double("noise.stripe_value_low", [](RunConfig& c) -> double& { return c.noise.stripe_value_low; }));
    h.push_back(make_double("noise.stripe_value_high", [](RunConfig& c) -> double& { return c.noise.stripe_value_high; }));
    h.push_back(make_double("noise.impulse_density", [](RunConfig& c) -> double& { return c.noise.impulse_density; }));
    h.push_back(make_double("noise.impulse_extra_low", [](RunConfig& c) -> double& { return c.noise.impulse_extra_low; }));
    h.push_back(make_double("noise.impulse_extra_high", [](RunConfig& c) -> double& { return c.noise.impulse_extra_high; }));
    h.push_back({"trace.reference",
                 [](const RunConfig& c) { return c.trace_reference; },
                 [](RunConfig& c, const std::string& v) { c.trace_reference = v; }});
    return h;
  }();
  return handlers;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig config;
  std::set<std::string> seen;
  std::istringstream stream(text);
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      fail_argument("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    const KeyHandler* handler = nullptr;
    for (const KeyHandler& h : key_handlers()) {
      if (h.key == key) {
        handler = &h;
        break;
      }
    }
    if (handler == nullptr) {
      fail_argument("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (!seen.insert(key).second) {
      fail_argument("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    handler->set(config, value);
  }
  config.solver.validate();
  config.noise.validate();
  return config;
}

std::string serialize_config(const RunConfig& config) {
  std::string out;
  for (const KeyHandler& h : key_handlers()) {
    out += h.key;
    out += " = ";
    out += h.get(config);
    out += '\n';
  }
  return out;
}

RunConfig read_config(const std::string& path) {
  return parse_config(read_text_file(path));
}

void set_config_key(RunConfig& config, const std::string& key,
                    const std::string& value) {
  for (const KeyHandler& h : key_handlers()) {
    if (h.key == key) {
      h.set(config, trim(value));
      return;
    }
  }
  fail_argument("config: unknown key '" + key + "'");
}

namespace {

constexpr std::int64_t kMaxCubeElements = std::int64_t{1} << 31;

}  // namespace

HsiCube read_cube(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Status::io_failure, "cannot open '" + path + "' for reading");
  std::string header;
  if (!std::getline(in, header)) fail(Status::io_failure, path + ": missing header line");
  std::istringstream hs(header);
  std::string magic, tag, extra;
  long long rows = 0, cols = 0, bands = 0;
  if (!(hs >> magic >> rows >> cols >> bands >> tag) || (hs >> extra)) {
    fail(Status::io_failure, path + ": malformed cube header");
  }
  if (magic != "HSIC1") fail(Status::io_failure, path + ": bad magic '" + magic + "'");
  if (tag != "f32") fail(Status::io_failure, path + ": unsupported value type '" + tag + "'");
  if (rows <= 0 || cols <= 0 || bands <= 0 ||
      static_cast<std::int64_t>(rows) * cols * bands > kMaxCubeElements) {
    fail(Status::io_failure, path + ": bad dimensions in header");
  }
  HsiCube cube(rows, cols, bands);
  const std::size_t count = static_cast<std::size_t>(cube.size());
  std::vector<unsigned char> raw(count * 4);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
    fail(Status::io_failure, path + ": payload shorter than header promises");
  }
  if (in.get() != std::ifstream::traits_type::eof()) {
    fail(Status::io_failure, path + ": trailing bytes after payload");
  }
  for (std::size_t k = 0; k < count; ++k) {
    const std::uint32_t bits = static_cast<std::uint32_t>(raw[4 * k]) |
                               static_cast<std::uint32_t>(raw[4 * k + 1]) << 8 |
                               static_cast<std::uint32_t>(raw[4 * k + 2]) << 16 |
                               static_cast<std::uint32_t>(raw[4 * k + 3]) << 24;
    cube.data()[k] = static_cast<double>(std::bit_cast<float>(bits));
  }
  return cube;
}

void write_cube(const std::string& path, const HsiCube& cube) {
  if (cube.empty()) fail_argument("write_cube: empty cube");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Status::io_failure, "cannot open '" + path + "' for writing");
  char header[96];
  std::snprintf(header, sizeof(header), "HSIC1 %lld %lld %lld f32\n",
                static_cast<long long>(cube.rows()), static_cast<long long>(cube.cols()),
                static_cast<long long>(cube.bands()));
  out << header;
  std::vector<unsigned char> raw(static_cast<std::size_t>(cube.size()) * 4);
  for (Index k = 0; k < cube.size(); ++k) {
    const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(cube.data()[k]));
    raw[static_cast<std::size_t>(4 * k)] = static_cast<unsigned char>(bits & 0xFF);
    raw[static_cast<std::size_t>(4 * k + 1)] = static_cast<unsigned char>((bits >> 8) & 0xFF);
    raw[static_cast<std::size_t>(4 * k + 2)] = static_cast<unsigned char>((bits >> 16) & 0xFF);
    raw[static_cast<std::size_t>(4 * k + 3)] = static_cast<unsigned char>((bits >> 24) & 0xFF);
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) fail(Status::io_failure, "failed writing payload to '" + path + "'");
}

std::string format_trace(const DenoiseResult& result) {
  std::string out;
  out += "# converged = ";
  out += result.converged ? "true" : "false";
  out += "\n# iterations_used = " + std::to_string(result.iterations_used) + "\n";
  const bool with_metrics =
      !result.trace.records.empty() && result.trace.records.front().has_metrics;
  out += "iter,rho,r_fit,r_patch,r_cube,r_tv";
  if (with_metrics) out += ",mpsnr,mssim,ergas";
  out += '\n';
  for (const IterationRecord& rec : result.trace.records) {
    out += std::to_string(rec.iteration);
    out += ',' + format_double(rec.rho);
    out += ',' + format_double(rec.r_fit);
    out += ',' + format_double(rec.r_patch);
    out += ',' + format_double(rec.r_cube);
    out += ',' + format_double(rec.r_tv);
    if (with_metrics) {
      out += ',' + format_double(rec.mpsnr);
      out += ',' + format_double(rec.mssim);
      out += ',' + format_double(rec.ergas);
    }
    out += '\n';
  }
  return out;
}

std::string format_evaluation(const MetricsReport& report, const HsiCube& reference,
                              const HsiCube& test, Index signature_row,
                              Index signature_col) {
  std::string out;
  out += "mpsnr = " + format_double(report.mpsnr) + '\n';
  out += "mssim = " + format_double(report.mssim) + '\n';
  out += "ergas = " + format_double(report.ergas) + '\n';
  out += "ergas_excluded_bands = " + std::to_string(report.ergas_excluded_bands) + '\n';
  out += "band,psnr,ssim\n";
  for (std::size_t b = 0; b < report.per_band_psnr.size(); ++b) {
    out += std::to_string(b + 1);
    out += ',' + format_double(report.per_band_psnr[b]);
    out += ',' + format_double(report.per_band_ssim[b]);
    out += '\n';
  }
  if (signature_row >= 0) {
    const std::vector<double> ref_sig = spectral_signature(reference, signature_row, signature_col);
    const std::vector<double> test_sig = spectral_signature(test, signature_row, signature_col);
    out += "signature_pixel = " + std::to_string(signature_row) + ',' +
           std::to_string(signature_col) + '\n';
    out += "band,reference,test\n";
    for (std::size_t b = 0; b < ref_sig.size(); ++b) {
      out += std::to_string(b + 1);
      out += ',' + format_double(ref_sig[b]);
      out += ',' + format_double(test_sig[b]);
      out += '\n';
    }
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Status::io_failure, "cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) fail(Status::io_failure, "failed reading '" + path + "'");
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Status::io_failure, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) fail(Status::io_failure, "failed writing '" + path + "'");
}

}  // namespace l3s3tv
