#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "core/io.hpp"
#include "core/rng.hpp"
#include "doctest.h"

using namespace l3s3tv;

namespace {

// Unique scratch path, removed on destruction.
struct TempFile {
  std::filesystem::path path;

  explicit TempFile(const std::string& stem) {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           (stem + "_" + std::to_string(++counter) + ".tmp");
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path, ec);
  }
  std::string str() const { return path.string(); }
};

HsiCube random_cube(Index rows, Index cols, Index bands, std::uint64_t seed) {
  SplitMix64 rng(seed);
  HsiCube cube(rows, cols, bands);
  for (Index k = 0; k < cube.size(); ++k)
    cube.data()[k] = static_cast<double>(static_cast<float>(rng.next_double()));
  return cube;
}

}  // namespace

TEST_CASE("cube files round-trip through the float32 container") {
  HsiCube cube = random_cube(5, 7, 3, 61);
  TempFile file("cube_roundtrip");
  write_cube(file.str(), cube);

  // 19-byte header for these dims plus 4 bytes per value.
  CHECK(std::filesystem::file_size(file.path) ==
        16 + 4 * static_cast<std::uintmax_t>(cube.size()));

  HsiCube back = read_cube(file.str());
  REQUIRE(back.same_shape(cube));
  for (Index k = 0; k < cube.size(); ++k)
    REQUIRE(back.data()[k] == cube.data()[k]);  // float-representable values
}

TEST_CASE("cube reader rejects malformed containers") {
  TempFile missing("cube_missing");
  try {
    (void)read_cube(missing.str());
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.status() == Status::io_failure);
  }

  TempFile bad_magic("cube_magic");
  write_text_file(bad_magic.str(), "HSIX1 2 2 1 f32\n\0\0\0\0");
  CHECK_THROWS_AS((void)read_cube(bad_magic.str()), Error);

  HsiCube cube = random_cube(2, 2, 2, 62);
  TempFile truncated("cube_truncated");
  write_cube(truncated.str(), cube);
  std::filesystem::resize_file(truncated.path,
                               std::filesystem::file_size(truncated.path) - 4);
  CHECK_THROWS_AS((void)read_cube(truncated.str()), Error);

  TempFile padded("cube_padded");
  write_cube(padded.str(), cube);
  std::ofstream app(padded.path, std::ios::binary | std::ios::app);
  app << "xx";
  app.close();
  CHECK_THROWS_AS((void)read_cube(padded.str()), Error);

  TempFile bad_dims("cube_dims");
  write_text_file(bad_dims.str(), "HSIC1 0 2 1 f32\n");
  CHECK_THROWS_AS((void)read_cube(bad_dims.str()), Error);
}

TEST_CASE("config parse/serialize is canonical and strict") {
  RunConfig defaults;
  const std::string canonical = serialize_config(defaults);
  RunConfig reparsed = parse_config(canonical);
  CHECK(serialize_config(reparsed) == canonical);

  RunConfig parsed = parse_config(
      "# comment line\n"
      "solver.lambda = 0.7\n"
      "\n"
      "solver.mode = convex_rpca_sstv\n"
      "noise.variance = 0.05\n"
      "noise.case = 3\n");
  CHECK(parsed.solver.lambda == doctest::Approx(0.7));
  CHECK(parsed.solver.mode == SolverMode::convex_rpca_sstv);
  REQUIRE(parsed.noise.gaussian_variance.has_value());
  CHECK(*parsed.noise.gaussian_variance == doctest::Approx(0.05));
  CHECK(parsed.noise.case_id == 3);
  // Untouched keys keep their defaults.
  CHECK(parsed.solver.gamma == doctest::Approx(2e-3));

  CHECK_THROWS_AS((void)parse_config("solver.lambada = 1\n"), Error);
  CHECK_THROWS_AS((void)parse_config("solver.lambda = 1\nsolver.lambda = 2\n"),
                  Error);
  CHECK_THROWS_AS((void)parse_config("solver.lambda\n"), Error);
  CHECK_THROWS_AS((void)parse_config("solver.lambda = abc\n"), Error);
  CHECK_THROWS_AS((void)parse_config("solver.t_max = 1.5\n"), Error);
  CHECK_THROWS_AS((void)parse_config("noise.clip = yes\n"), Error);
  CHECK_THROWS_AS((void)parse_config("solver.mode = rpca\n"), Error);
}

TEST_CASE("auto sentinels round-trip optional noise knobs") {
  RunConfig config;
  CHECK(!config.noise.gaussian_variance.has_value());
  const std::string text = serialize_config(config);
  CHECK(text.find("noise.variance = auto") != std::string::npos);
  CHECK(text.find("noise.snr_low_db = auto") != std::string::npos);

  set_config_key(config, "noise.variance", "0.14");
  REQUIRE(config.noise.gaussian_variance.has_value());
  set_config_key(config, "noise.variance", "auto");
  CHECK(!config.noise.gaussian_variance.has_value());
}

TEST_CASE("set_config_key updates single values") {
  RunConfig config;
  set_config_key(config, "solver.threads", "4");
  CHECK(config.solver.threads == 4);
  set_config_key(config, "solver.l_anchor", "sum");
  CHECK(config.solver.l_anchor == LAnchor::sum);
  set_config_key(config, "tv.tau_z", "0.25");
  CHECK(config.solver.weights.tau_z == doctest::Approx(0.25));
  set_config_key(config, "trace.reference", "/some/path.hsic");
  CHECK(config.trace_reference == "/some/path.hsic");
  set_config_key(config, "noise.seed", "18446744073709551615");  // max u64
  CHECK(config.noise.seed == UINT64_MAX);

  CHECK_THROWS_AS(set_config_key(config, "nope", "1"), Error);
  CHECK_THROWS_AS(set_config_key(config, "solver.kappa", ""), Error);
}

TEST_CASE("read_config reads files and fails cleanly") {
  TempFile file("config_file");
  write_text_file(file.str(), "solver.epsilon = 1e-4\nsolver.t_max = 7\n");
  RunConfig config = read_config(file.str());
  CHECK(config.solver.epsilon == doctest::Approx(1e-4));
  CHECK(config.solver.t_max == 7);

  TempFile missing("config_missing");
  try {
    (void)read_config(missing.str());
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.status() == Status::io_failure);
  }
}

TEST_CASE("format_double emits shortest round-trip strings") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-0.25) == "-0.25");
  const double third = 1.0 / 3.0;
  double back = 0.0;
  const std::string s = format_double(third);
  std::sscanf(s.c_str(), "%lf", &back);
  CHECK(back == third);
}

TEST_CASE("format_trace lays out metadata then CSV") {
  DenoiseResult result;
  result.converged = true;
  result.iterations_used = 2;
  IterationRecord rec;
  rec.iteration = 1;
  rec.rho = 0.01;
  rec.r_fit = 0.5;
  rec.r_patch = 0.25;
  rec.r_cube = 0.125;
  rec.r_tv = 0.0625;
  rec.has_metrics = true;
  rec.mpsnr = 25.0;
  rec.mssim = 0.8;
  rec.ergas = 10.0;
  result.trace.records.push_back(rec);
  rec.iteration = 2;
  rec.mpsnr = 30.0;
  rec.mssim = 0.9;
  rec.ergas = 5.0;
  result.trace.records.push_back(rec);

  const std::string text = format_trace(result);
  CHECK(text.find("# converged = true") != std::string::npos);
  CHECK(text.find("# iterations_used = 2") != std::string::npos);
  CHECK(text.find("iter,rho,r_fit,r_patch,r_cube,r_tv,mpsnr,mssim,ergas") != std::string::npos);
  CHECK(text.find("1,0.01,0.5,0.25,0.125,0.0625,25,0.8,10") != std::string::npos);
  CHECK(text.find("2,0.01,0.5,0.25,0.125,0.0625,30,0.9,5") != std::string::npos);
}

TEST_CASE("format_evaluation reports aggregates, bands, signatures") {
  HsiCube ref = random_cube(6, 6, 2, 63);
  HsiCube test_cube = ref;
  test_cube.array() += 0.01;
  MetricsReport report = compute_metrics(ref, test_cube);

  const std::string with_sig = format_evaluation(report, ref, test_cube, 2, 3);
  CHECK(with_sig.find("mpsnr = ") != std::string::npos);
  CHECK(with_sig.find("mssim = ") != std::string::npos);
  CHECK(with_sig.find("ergas = ") != std::string::npos);
  CHECK(with_sig.find("band,psnr,ssim") != std::string::npos);
  CHECK(with_sig.find("signature_pixel = 2,3") != std::string::npos);
  CHECK(with_sig.find("band,reference,test") != std::string::npos);

  const std::string without = format_evaluation(report, ref, test_cube, -1, -1);
  CHECK(without.find("signature") == std::string::npos);
}
