#pragma once

#include <vector>

#include "core/cube.hpp"
#include "core/sstv.hpp"

namespace l3s3tv {

enum class SolverMode {
  l3s3tv,           // log-det low rank + l2,log column sparsity + tv
  convex_rpca_sstv, // nuclear norm + l2,1 baseline, tv kept
  l3s3_no_tv,       // log-det + l2,log, tv term dropped
};

// Anchor of the low-rank update. The two quadratic penalty terms complete
// to a single prox at the midpoint of their anchors with threshold 1/(2*rho)
// (midpoint, the algebraically exact form); `sum` instead shrinks the raw
// anchor sum at threshold 1/rho, kept as a compatibility switch.
enum class LAnchor { midpoint, sum };

struct SolverConfig {
  double lambda = 1.0;   // column-sparsity weight
  double gamma = 2e-3;   // tv weight
  TvWeights weights;
  double rho0 = 1e-2;
  double rho_max = 1e6;
  double kappa = 1.5;    // per-iteration rho growth
  double epsilon = 1e-6; // residual tolerance
  int t_max = 100;
  Index patch_rows = 20;
  Index patch_cols = 20;
  Index stride_rows = 10;
  Index stride_cols = 10;
  SolverMode mode = SolverMode::l3s3tv;
  LAnchor l_anchor = LAnchor::midpoint;
  int threads = 1;
  // Reserved knob: reductions are ordered deterministically regardless, so
  // results never depend on the thread count.
  bool deterministic = true;

  void validate() const;
};

struct IterationRecord {
  int iteration = 0;
  double rho = 0.0;     // value used during this iteration's updates
  double r_fit = 0.0;   // max over patches of ||O - L - S||_inf
  double r_patch = 0.0; // max over patches of ||L - A||_inf
  double r_cube = 0.0;  // ||A - B||_inf (0 in no-tv mode)
  double r_tv = 0.0;    // ||C - D B||_inf (0 in no-tv mode)
  bool has_metrics = false;
  double mpsnr = 0.0;
  double mssim = 0.0;
  double ergas = 0.0;

  double max_residual() const;
};

struct IterationTrace {
  std::vector<IterationRecord> records;
};

struct DenoiseResult {
  HsiCube denoised;  // low-rank estimate, overlap-averaged
  HsiCube sparse;    // column-sparse estimate, overlap-averaged
  IterationTrace trace;
  bool converged = false;
  int iterations_used = 0;
};

// One low-rank patch step: shrinks the singular values of the anchor built
// from X = O - S + ZO/rho + A - ZA/rho (see LAnchor). `convex` swaps the
// log shrinkage for the nuclear-norm one.
Eigen::MatrixXd update_L_patch(const Eigen::MatrixXd& O, const Eigen::MatrixXd& S,
                               const Eigen::MatrixXd& ZO, const Eigen::MatrixXd& A,
                               const Eigen::MatrixXd& ZA, double rho,
                               LAnchor anchor = LAnchor::midpoint,
                               bool convex = false);

// One sparse patch step: column shrinkage of O - L + ZO/rho at lambda/rho.
Eigen::MatrixXd update_S_patch(const Eigen::MatrixXd& O, const Eigen::MatrixXd& L,
                               const Eigen::MatrixXd& ZO, double lambda, double rho,
                               bool convex = false);

// Patch-consensus update: per element, the scatter-accumulated sum of
// L + ZA/rho over covering patches, plus B - ZB/rho when B is present,
// divided by overlap count (+1 with B).
HsiCube update_A(const std::vector<Eigen::MatrixXd>& L_patches,
                 const std::vector<Eigen::MatrixXd>& ZA_patches, const HsiCube* B,
                 const HsiCube* ZB, double rho, const PatchGrid& grid, Index bands);

// Gradient-variable update: soft threshold of apply_D(B) - ZC/rho at
// gamma/rho.
GradientStack update_C(const HsiCube& B, const GradientStack& ZC, double gamma,
                       double rho, const TvWeights& w);

// Overlap-count-weighted average of per-patch matrices into a cube.
HsiCube average_patches(const std::vector<Eigen::MatrixXd>& patches,
                        const PatchGrid& grid, Index bands);

// Full alternating loop. O must already be normalized; trace_reference,
// when given, must share O's shape and domain and adds per-iteration
// quality metrics to the trace.
DenoiseResult run(const HsiCube& O, const SolverConfig& config,
                  const HsiCube* trace_reference = nullptr);

}  // namespace l3s3tv
