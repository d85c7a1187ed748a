#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "core/cube.hpp"
#include "core/errors.hpp"

namespace l3s3tv {

// Thin SVD of an a x b matrix: A = U diag(s) V^T with r = min(a, b) columns.
struct ThinSvd {
  Eigen::MatrixXd left_vectors;
  Eigen::VectorXd singular_values;  // nonincreasing, >= 0
  Eigen::MatrixXd right_vectors;
};

ThinSvd thin_svd(const Eigen::MatrixXd& matrix);

// M x N x p grid of Fourier coefficients, same memory layout as HsiCube
// (band-sequential, row-major within a band).
class SpectralGrid {
 public:
  SpectralGrid() = default;
  SpectralGrid(Index rows, Index cols, Index bands,
               std::complex<double> fill = {0.0, 0.0});

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index bands() const { return bands_; }
  Index size() const { return rows_ * cols_ * bands_; }

  bool same_shape(const SpectralGrid& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && bands_ == other.bands_;
  }

  std::complex<double>& at(Index i, Index j, Index b) {
    return values_[b * rows_ * cols_ + i * cols_ + j];
  }
  std::complex<double> at(Index i, Index j, Index b) const {
    return values_[b * rows_ * cols_ + i * cols_ + j];
  }

  std::complex<double>* data() { return values_.data(); }
  const std::complex<double>* data() const { return values_.data(); }

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  Index bands_ = 0;
  std::vector<std::complex<double>> values_;
};

// Unnormalized forward DFT, X_k = sum_i x_i exp(-2*pi*i*<k,i>/n).
SpectralGrid dft3_forward(const HsiCube& cube);

// Inverse scaled by 1/(M*N*p); round trips dft3_forward to within 1e-10.
// The imaginary part is discarded; when max_imag is given, it receives the
// largest |imag| seen so callers can assert the result was real.
HsiCube dft3_inverse(const SpectralGrid& grid, double* max_imag = nullptr);

// Spatial/spectral axes of the cube: x runs over rows, y over columns,
// z over bands.
enum class Axis { x, y, z };

// Fourier multiplier of the periodic forward-difference operator along one
// axis: lambda_k = exp(2*pi*i*k/n) - 1, broadcast over the full grid, so
// dft3_forward(D_axis x) = lambda (.) dft3_forward(x).
SpectralGrid difference_transfer(Axis axis, Index rows, Index cols, Index bands);

}  // namespace l3s3tv
