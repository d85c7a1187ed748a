#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "core/errors.hpp"

namespace l3s3tv {

using Index = Eigen::Index;

// Dense M x N x p hyperspectral cube. Storage is band-sequential (all of
// band 0, then band 1, ...), row-major within a band, so a band is one
// contiguous M*N slice.
class HsiCube {
 public:
  HsiCube() = default;
  HsiCube(Index rows, Index cols, Index bands, double fill = 0.0);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index bands() const { return bands_; }
  Index band_size() const { return rows_ * cols_; }
  Index size() const { return rows_ * cols_ * bands_; }
  bool empty() const { return size() == 0; }

  bool same_shape(const HsiCube& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && bands_ == other.bands_;
  }

  double& at(Index i, Index j, Index b) { return values_[index_of(i, j, b)]; }
  double at(Index i, Index j, Index b) const { return values_[index_of(i, j, b)]; }

  Index index_of(Index i, Index j, Index b) const {
    return b * band_size() + i * cols_ + j;
  }

  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }

  double* band_data(Index b) { return values_.data() + b * band_size(); }
  const double* band_data(Index b) const { return values_.data() + b * band_size(); }

  Eigen::Map<Eigen::ArrayXd> array() {
    return Eigen::Map<Eigen::ArrayXd>(values_.data(), size());
  }
  Eigen::Map<const Eigen::ArrayXd> array() const {
    return Eigen::Map<const Eigen::ArrayXd>(values_.data(), size());
  }
  Eigen::Map<Eigen::ArrayXd> band_array(Index b) {
    return Eigen::Map<Eigen::ArrayXd>(band_data(b), band_size());
  }
  Eigen::Map<const Eigen::ArrayXd> band_array(Index b) const {
    return Eigen::Map<const Eigen::ArrayXd>(band_data(b), band_size());
  }

  bool all_finite() const { return values_.empty() || array().isFinite().all(); }

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  Index bands_ = 0;
  std::vector<double> values_;
};

// Per-band (min, max) pairs recorded by normalize_bands. max == min marks a
// constant band, which normalizes to zeros and denormalizes back to min.
struct BandScale {
  std::vector<std::pair<double, double>> min_max;

  Index bands() const { return static_cast<Index>(min_max.size()); }
};

struct Anchor {
  Index row = 0;
  Index col = 0;
};

// Overlapping patch layout: anchors are top-left corners, every patch lies
// fully inside the image, and overlap_counts[i*N + j] is the number of
// patches covering pixel (i, j).
class PatchGrid {
 public:
  PatchGrid() = default;
  PatchGrid(Index image_rows, Index image_cols, Index patch_rows, Index patch_cols,
            Index stride_rows, Index stride_cols, std::vector<Anchor> anchors);

  Index image_rows() const { return image_rows_; }
  Index image_cols() const { return image_cols_; }
  Index patch_rows() const { return patch_rows_; }
  Index patch_cols() const { return patch_cols_; }
  Index stride_rows() const { return stride_rows_; }
  Index stride_cols() const { return stride_cols_; }
  Index patch_size() const { return patch_rows_ * patch_cols_; }
  Index patch_count() const { return static_cast<Index>(anchors_.size()); }
  const std::vector<Anchor>& anchors() const { return anchors_; }
  const Anchor& anchor(Index k) const;

  int overlap_count(Index i, Index j) const {
    return overlap_counts_[i * image_cols_ + j];
  }
  const std::vector<int>& overlap_counts() const { return overlap_counts_; }

 private:
  Index image_rows_ = 0;
  Index image_cols_ = 0;
  Index patch_rows_ = 0;
  Index patch_cols_ = 0;
  Index stride_rows_ = 0;
  Index stride_cols_ = 0;
  std::vector<Anchor> anchors_;
  std::vector<int> overlap_counts_;
};

// mn x p Casorati matrix of one patch: column t is band t of the patch,
// vectorized column-major over the patch's spatial extent.
using CasoratiMatrix = Eigen::MatrixXd;

// Affinely maps each band onto [0,1]; constant bands map to zeros.
std::pair<HsiCube, BandScale> normalize_bands(const HsiCube& cube);

// Inverse of normalize_bands: x * (max - min) + min per band.
HsiCube denormalize(const HsiCube& cube, const BandScale& scale);

// Anchor rows are {0, stride, 2*stride, ...} with a final anchor clamped to
// M - m (deduplicated) so the last patch ends exactly at the image border.
PatchGrid plan_patches(Index image_rows, Index image_cols, Index patch_rows,
                       Index patch_cols, Index stride_rows, Index stride_cols);

CasoratiMatrix extract_casorati(const HsiCube& cube, const PatchGrid& grid,
                                Index anchor_index);

// Adjoint of extract_casorati: adds the patch values into the accumulator at
// the patch footprint. Concurrent calls into one accumulator must be
// serialized by the caller.
void scatter_add(HsiCube& accumulator, const PatchGrid& grid, Index anchor_index,
                 const CasoratiMatrix& patch);

}  // namespace l3s3tv
