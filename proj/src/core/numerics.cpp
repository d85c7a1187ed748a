#include "core/numerics.hpp"

#include <fftw3.h>

#include <Eigen/SVD>
#include <cmath>
#include <mutex>
#include <numbers>

namespace l3s3tv {

ThinSvd thin_svd(const Eigen::MatrixXd& matrix) {
  if (!matrix.allFinite()) fail(Status::numeric_failure, "thin_svd: non-finite input");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
  ThinSvd out;
  out.left_vectors = svd.matrixU();
  out.singular_values = svd.singularValues();
  out.right_vectors = svd.matrixV();
  if (!out.singular_values.allFinite()) {
    fail(Status::numeric_failure, "thin_svd: decomposition produced non-finite values");
  }
  return out;
}

SpectralGrid::SpectralGrid(Index rows, Index cols, Index bands,
                           std::complex<double> fill)
    : rows_(rows), cols_(cols), bands_(bands) {
  if (rows <= 0 || cols <= 0 || bands <= 0) {
    fail_argument("spectral grid dimensions must be positive");
  }
  values_.assign(static_cast<std::size_t>(rows) * cols * bands, fill);
}

namespace {

// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void run_dft3(const std::complex<double>* in, std::complex<double>* out, Index rows,
              Index cols, Index bands, int sign) {
  // Layout is band-sequential row-major, i.e. row-major over (bands, rows, cols).
  auto* fin = reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in));
  auto* fout = reinterpret_cast<fftw_complex*>(out);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_3d(static_cast<int>(bands), static_cast<int>(rows),
                            static_cast<int>(cols), fin, fout, sign,
                            FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
  }
  if (plan == nullptr) fail(Status::numeric_failure, "fftw plan creation failed");
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
}

}  // namespace

SpectralGrid dft3_forward(const HsiCube& cube) {
  if (cube.empty()) fail_argument("dft3_forward: empty cube");
  std::vector<std::complex<double>> in(static_cast<std::size_t>(cube.size()));
  for (Index k = 0; k < cube.size(); ++k) in[static_cast<std::size_t>(k)] = cube.data()[k];
  SpectralGrid out(cube.rows(), cube.cols(), cube.bands());
  run_dft3(in.data(), out.data(), cube.rows(), cube.cols(), cube.bands(),
           FFTW_FORWARD);
  return out;
}

HsiCube dft3_inverse(const SpectralGrid& grid, double* max_imag) {
  if (grid.size() == 0) fail_argument("dft3_inverse: empty grid");
  std::vector<std::complex<double>> out(static_cast<std::size_t>(grid.size()));
  run_dft3(grid.data(), out.data(), grid.rows(), grid.cols(), grid.bands(),
           FFTW_BACKWARD);
  HsiCube cube(grid.rows(), grid.cols(), grid.bands());
  const double scale = 1.0 / static_cast<double>(grid.size());
  double worst = 0.0;
  for (Index k = 0; k < grid.size(); ++k) {
    const auto& v = out[static_cast<std::size_t>(k)];
    cube.data()[k] = v.real() * scale;
    worst = std::max(worst, std::abs(v.imag()) * scale);
  }
  if (max_imag != nullptr) *max_imag = worst;
  return cube;
}

SpectralGrid difference_transfer(Axis axis, Index rows, Index cols, Index bands) {
  SpectralGrid out(rows, cols, bands);
  const Index n = axis == Axis::x ? rows : axis == Axis::y ? cols : bands;
  std::vector<std::complex<double>> lambda(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(n);
    lambda[static_cast<std::size_t>(k)] =
        std::complex<double>(std::cos(theta) - 1.0, std::sin(theta));
  }
  for (Index b = 0; b < bands; ++b) {
    for (Index i = 0; i < rows; ++i) {
      for (Index j = 0; j < cols; ++j) {
        const Index k = axis == Axis::x ? i : axis == Axis::y ? j : b;
        out.at(i, j, b) = lambda[static_cast<std::size_t>(k)];
      }
    }
  }
  return out;
}

}  // namespace l3s3tv
