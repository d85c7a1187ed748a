#include "core/cube.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace l3s3tv {

HsiCube::HsiCube(Index rows, Index cols, Index bands, double fill)
    : rows_(rows), cols_(cols), bands_(bands) {
  if (rows <= 0 || cols <= 0 || bands <= 0) {
    fail_argument("cube dimensions must be positive, got " + std::to_string(rows) +
                  "x" + std::to_string(cols) + "x" + std::to_string(bands));
  }
  values_.assign(static_cast<std::size_t>(rows) * cols * bands, fill);
}

std::pair<HsiCube, BandScale> normalize_bands(const HsiCube& cube) {
  if (cube.empty()) fail_argument("normalize_bands: empty cube");
  if (!cube.all_finite()) fail(Status::numeric_failure, "normalize_bands: non-finite input");
  HsiCube out(cube.rows(), cube.cols(), cube.bands());
  BandScale scale;
  scale.min_max.resize(static_cast<std::size_t>(cube.bands()));
  for (Index b = 0; b < cube.bands(); ++b) {
    auto src = cube.band_array(b);
    const double lo = src.minCoeff();
    const double hi = src.maxCoeff();
    scale.min_max[static_cast<std::size_t>(b)] = {lo, hi};
    if (hi > lo) {
      out.band_array(b) = (src - lo) / (hi - lo);
    } else {
      out.band_array(b).setZero();
    }
  }
  return {std::move(out), std::move(scale)};
}

HsiCube denormalize(const HsiCube& cube, const BandScale& scale) {
  if (cube.empty()) fail_argument("denormalize: empty cube");
  if (scale.bands() != cube.bands()) {
    fail_argument("denormalize: scale has " + std::to_string(scale.bands()) +
                  " bands, cube has " + std::to_string(cube.bands()));
  }
  HsiCube out(cube.rows(), cube.cols(), cube.bands());
  for (Index b = 0; b < cube.bands(); ++b) {
    const auto [lo, hi] = scale.min_max[static_cast<std::size_t>(b)];
    out.band_array(b) = cube.band_array(b) * (hi - lo) + lo;
  }
  return out;
}

namespace {

// {0, s, 2s, ...} capped so patches fit, plus a clamped final anchor at
// image - patch when the regular lattice stops short of the far edge.
std::vector<Index> anchor_positions(Index image, Index patch, Index stride) {
  std::vector<Index> pos;
  for (Index a = 0; a + patch <= image; a += stride) pos.push_back(a);
  const Index last = image - patch;
  if (pos.empty() || pos.back() != last) pos.push_back(last);
  return pos;
}

}  // namespace

PatchGrid::PatchGrid(Index image_rows, Index image_cols, Index patch_rows,
                     Index patch_cols, Index stride_rows, Index stride_cols,
                     std::vector<Anchor> anchors)
    : image_rows_(image_rows),
      image_cols_(image_cols),
      patch_rows_(patch_rows),
      patch_cols_(patch_cols),
      stride_rows_(stride_rows),
      stride_cols_(stride_cols),
      anchors_(std::move(anchors)) {
  overlap_counts_.assign(static_cast<std::size_t>(image_rows_) * image_cols_, 0);
  for (const Anchor& a : anchors_) {
    for (Index i = a.row; i < a.row + patch_rows_; ++i) {
      for (Index j = a.col; j < a.col + patch_cols_; ++j) {
        ++overlap_counts_[i * image_cols_ + j];
      }
    }
  }
}

const Anchor& PatchGrid::anchor(Index k) const {
  if (k < 0 || k >= patch_count()) {
    fail_argument("patch index " + std::to_string(k) + " out of range [0, " +
                  std::to_string(patch_count()) + ")");
  }
  return anchors_[static_cast<std::size_t>(k)];
}

PatchGrid plan_patches(Index image_rows, Index image_cols, Index patch_rows,
                       Index patch_cols, Index stride_rows, Index stride_cols) {
  if (image_rows <= 0 || image_cols <= 0) fail_argument("plan_patches: empty image");
  if (patch_rows <= 0 || patch_cols <= 0) fail_argument("plan_patches: empty patch");
  if (stride_rows <= 0 || stride_cols <= 0) fail_argument("plan_patches: stride must be positive");
  // A stride beyond the patch extent leaves interior pixels with no covering
  // patch, breaking the coverage invariant the overlap averages rely on.
  if (stride_rows > patch_rows || stride_cols > patch_cols) {
    fail_argument("plan_patches: stride exceeds patch size, leaving coverage gaps");
  }
  if (patch_rows > image_rows || patch_cols > image_cols) {
    fail_argument("plan_patches: patch " + std::to_string(patch_rows) + "x" +
                  std::to_string(patch_cols) + " exceeds image " +
                  std::to_string(image_rows) + "x" + std::to_string(image_cols));
  }
  const std::vector<Index> row_pos = anchor_positions(image_rows, patch_rows, stride_rows);
  const std::vector<Index> col_pos = anchor_positions(image_cols, patch_cols, stride_cols);
  std::vector<Anchor> anchors;
  anchors.reserve(row_pos.size() * col_pos.size());
  for (Index r : row_pos) {
    for (Index c : col_pos) anchors.push_back({r, c});
  }
  return PatchGrid(image_rows, image_cols, patch_rows, patch_cols, stride_rows,
                   stride_cols, std::move(anchors));
}

CasoratiMatrix extract_casorati(const HsiCube& cube, const PatchGrid& grid,
                                Index anchor_index) {
  const Anchor& a = grid.anchor(anchor_index);
  const Index m = grid.patch_rows();
  const Index n = grid.patch_cols();
  CasoratiMatrix out(m * n, cube.bands());
  for (Index b = 0; b < cube.bands(); ++b) {
    for (Index jc = 0; jc < n; ++jc) {
      for (Index ir = 0; ir < m; ++ir) {
        out(jc * m + ir, b) = cube.at(a.row + ir, a.col + jc, b);
      }
    }
  }
  return out;
}

void scatter_add(HsiCube& accumulator, const PatchGrid& grid, Index anchor_index,
                 const CasoratiMatrix& patch) {
  const Anchor& a = grid.anchor(anchor_index);
  const Index m = grid.patch_rows();
  const Index n = grid.patch_cols();
  if (patch.rows() != m * n || patch.cols() != accumulator.bands()) {
    fail_argument("scatter_add: patch shape mismatch");
  }
  for (Index b = 0; b < accumulator.bands(); ++b) {
    for (Index jc = 0; jc < n; ++jc) {
      for (Index ir = 0; ir < m; ++ir) {
        accumulator.at(a.row + ir, a.col + jc, b) += patch(jc * m + ir, b);
      }
    }
  }
}

}  // namespace l3s3tv
