#include "core/solver.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "core/errors.hpp"
#include "core/metrics.hpp"
#include "core/prox.hpp"

namespace l3s3tv {

void SolverConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) fail_argument("lambda must be positive");
  if (gamma < 0.0 || !std::isfinite(gamma)) fail_argument("gamma must be nonnegative");
  if (!(rho0 > 0.0) || !std::isfinite(rho0)) fail_argument("rho0 must be positive");
  if (!(rho_max >= rho0) || !std::isfinite(rho_max)) fail_argument("rho_max must be >= rho0");
  if (!(kappa > 1.0) || !std::isfinite(kappa)) fail_argument("kappa must be > 1");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) fail_argument("epsilon must be positive");
  if (t_max < 1) fail_argument("t_max must be >= 1");
  if (patch_rows < 1 || patch_cols < 1) fail_argument("patch dims must be >= 1");
  if (stride_rows < 1 || stride_cols < 1) fail_argument("strides must be >= 1");
  if (threads < 1) fail_argument("threads must be >= 1");
  const bool w_ok = std::isfinite(weights.tau_x) && weights.tau_x >= 0.0 &&
                    std::isfinite(weights.tau_y) && weights.tau_y >= 0.0 &&
                    std::isfinite(weights.tau_z) && weights.tau_z >= 0.0;
  if (!w_ok) fail_argument("tv weights must be finite and nonnegative");
}

double IterationRecord::max_residual() const {
  return std::max(std::max(r_fit, r_patch), std::max(r_cube, r_tv));
}

Eigen::MatrixXd update_L_patch(const Eigen::MatrixXd& O, const Eigen::MatrixXd& S,
                               const Eigen::MatrixXd& ZO, const Eigen::MatrixXd& A,
                               const Eigen::MatrixXd& ZA, double rho, LAnchor anchor,
                               bool convex) {
  if (!(rho > 0.0)) fail_argument("update_L_patch: rho must be positive");
  if (O.rows() != S.rows() || O.cols() != S.cols() || O.rows() != ZO.rows() ||
      O.cols() != ZO.cols() || O.rows() != A.rows() || O.cols() != A.cols() ||
      O.rows() != ZA.rows() || O.cols() != ZA.cols()) {
    fail_argument("update_L_patch: shape mismatch");
  }
  const double inv_rho = 1.0 / rho;
  Eigen::MatrixXd X = O - S + ZO * inv_rho + A - ZA * inv_rho;
  double threshold = inv_rho;
  if (anchor == LAnchor::midpoint) {
    X *= 0.5;
    threshold = 0.5 * inv_rho;
  }
  return convex ? nuclear_svt(X, threshold) : logdet_svt(X, threshold);
}

Eigen::MatrixXd update_S_patch(const Eigen::MatrixXd& O, const Eigen::MatrixXd& L,
                               const Eigen::MatrixXd& ZO, double lambda, double rho,
                               bool convex) {
  if (!(rho > 0.0)) fail_argument("update_S_patch: rho must be positive");
  const Eigen::MatrixXd residual = O - L + ZO * (1.0 / rho);
  return convex ? l21_shrink(residual, lambda / rho)
                : l2log_shrink(residual, lambda / rho);
}

HsiCube update_A(const std::vector<Eigen::MatrixXd>& L_patches,
                 const std::vector<Eigen::MatrixXd>& ZA_patches, const HsiCube* B,
                 const HsiCube* ZB, double rho, const PatchGrid& grid, Index bands) {
  if (!(rho > 0.0)) fail_argument("update_A: rho must be positive");
  if (L_patches.size() != ZA_patches.size() ||
      static_cast<Index>(L_patches.size()) != grid.patch_count()) {
    fail_argument("update_A: patch list sizes disagree with grid");
  }
  if ((B == nullptr) != (ZB == nullptr)) fail_argument("update_A: B and ZB must come together");
  const double inv_rho = 1.0 / rho;
  HsiCube numer(grid.image_rows(), grid.image_cols(), bands);
  for (Index k = 0; k < grid.patch_count(); ++k) {
    const Eigen::MatrixXd term = L_patches[static_cast<std::size_t>(k)] +
                                 ZA_patches[static_cast<std::size_t>(k)] * inv_rho;
    scatter_add(numer, grid, k, term);
  }
  const int extra = B != nullptr ? 1 : 0;
  if (B != nullptr) numer.array() += B->array() - ZB->array() * inv_rho;
  HsiCube A(grid.image_rows(), grid.image_cols(), bands);
  for (Index b = 0; b < bands; ++b) {
    for (Index i = 0; i < grid.image_rows(); ++i) {
      for (Index j = 0; j < grid.image_cols(); ++j) {
        A.at(i, j, b) =
            numer.at(i, j, b) / static_cast<double>(grid.overlap_count(i, j) + extra);
      }
    }
  }
  return A;
}

GradientStack update_C(const HsiCube& B, const GradientStack& ZC, double gamma,
                       double rho, const TvWeights& w) {
  if (!(rho > 0.0)) fail_argument("update_C: rho must be positive");
  if (gamma < 0.0) fail_argument("update_C: gamma must be nonnegative");
  const double inv_rho = 1.0 / rho;
  GradientStack C = apply_D(B, w);
  C.x.array() -= ZC.x.array() * inv_rho;
  C.y.array() -= ZC.y.array() * inv_rho;
  C.z.array() -= ZC.z.array() * inv_rho;
  const double theta = gamma * inv_rho;
  soft_threshold_inplace(C.x, theta);
  soft_threshold_inplace(C.y, theta);
  soft_threshold_inplace(C.z, theta);
  return C;
}

HsiCube average_patches(const std::vector<Eigen::MatrixXd>& patches,
                        const PatchGrid& grid, Index bands) {
  if (static_cast<Index>(patches.size()) != grid.patch_count()) {
    fail_argument("average_patches: patch count mismatch");
  }
  HsiCube sum(grid.image_rows(), grid.image_cols(), bands);
  for (Index k = 0; k < grid.patch_count(); ++k) {
    scatter_add(sum, grid, k, patches[static_cast<std::size_t>(k)]);
  }
  for (Index b = 0; b < bands; ++b) {
    for (Index i = 0; i < grid.image_rows(); ++i) {
      for (Index j = 0; j < grid.image_cols(); ++j) {
        sum.at(i, j, b) /= static_cast<double>(grid.overlap_count(i, j));
      }
    }
  }
  return sum;
}

namespace {

// Runs fn(k) over k in [0, count), possibly on several threads; any
// exception is rethrown on the calling thread.
template <typename Fn>
void parallel_for_patches(Index count, int threads, Fn&& fn) {
  const int workers = static_cast<int>(
      std::min<Index>(count, std::max<Index>(1, static_cast<Index>(threads))));
  if (workers <= 1) {
    for (Index k = 0; k < count; ++k) fn(k);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (Index k = w; k < count; k += workers) fn(k);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double stack_abs_max(const GradientStack& g) {
  return std::max({g.x.array().abs().maxCoeff(), g.y.array().abs().maxCoeff(),
                   g.z.array().abs().maxCoeff()});
}

}  // namespace

DenoiseResult run(const HsiCube& O, const SolverConfig& config,
                  const HsiCube* trace_reference) {
  config.validate();
  if (O.empty()) fail_argument("run: empty cube");
  if (!O.all_finite()) fail(Status::numeric_failure, "run: non-finite input");
  if (trace_reference != nullptr && !trace_reference->same_shape(O)) {
    fail_argument("run: trace reference shape mismatch");
  }
  // gamma = 0 removes the tv term entirely; the B/C splitting variables are
  // then superfluous and only add relaxation noise to the iterates, so the
  // no-tv path handles that case for every mode.
  const bool with_tv = config.mode != SolverMode::l3s3_no_tv && config.gamma > 0.0;
  const bool convex = config.mode == SolverMode::convex_rpca_sstv;
  const Index bands = O.bands();
  const PatchGrid grid =
      plan_patches(O.rows(), O.cols(), config.patch_rows, config.patch_cols,
                   config.stride_rows, config.stride_cols);
  const Index n_patches = grid.patch_count();
  const auto s = [](Index k) { return static_cast<std::size_t>(k); };

  std::vector<Eigen::MatrixXd> L(s(n_patches)), S(s(n_patches)), ZO(s(n_patches)),
      ZA(s(n_patches));
  for (Index k = 0; k < n_patches; ++k) {
    L[s(k)] = extract_casorati(O, grid, k);
    S[s(k)] = Eigen::MatrixXd::Zero(grid.patch_size(), bands);
    ZO[s(k)] = Eigen::MatrixXd::Zero(grid.patch_size(), bands);
    ZA[s(k)] = Eigen::MatrixXd::Zero(grid.patch_size(), bands);
  }
  HsiCube A = O;
  HsiCube B = with_tv ? O : HsiCube();
  HsiCube ZB = with_tv ? HsiCube(O.rows(), O.cols(), bands) : HsiCube();
  GradientStack C, ZC;
  FourierDenominator denom;
  if (with_tv) {
    C = apply_D(O, config.weights);
    ZC = zero_stack(O.rows(), O.cols(), bands);
    denom = precompute_denominator(O.rows(), O.cols(), bands, config.weights);
  }

  double rho = config.rho0;
  DenoiseResult result;
  for (int t = 1; t <= config.t_max; ++t) {
    IterationRecord rec;
    rec.iteration = t;
    rec.rho = rho;

    parallel_for_patches(n_patches, config.threads, [&](Index k) {
      const Eigen::MatrixXd Ok = extract_casorati(O, grid, k);
      const Eigen::MatrixXd Ak = extract_casorati(A, grid, k);
      L[s(k)] = update_L_patch(Ok, S[s(k)], ZO[s(k)], Ak, ZA[s(k)], rho,
                               config.l_anchor, convex);
      S[s(k)] = update_S_patch(Ok, L[s(k)], ZO[s(k)], config.lambda, rho, convex);
    });

    A = update_A(L, ZA, with_tv ? &B : nullptr, with_tv ? &ZB : nullptr, rho, grid,
                 bands);
    if (with_tv) {
      B = solve_B(C, ZC, A, ZB, rho, denom, config.weights);
      C = update_C(B, ZC, config.gamma, rho, config.weights);
    }

    // Constraint violations double as multiplier increments.
    double r_fit = 0.0, r_patch = 0.0;
    for (Index k = 0; k < n_patches; ++k) {
      const Eigen::MatrixXd Ok = extract_casorati(O, grid, k);
      const Eigen::MatrixXd Ak = extract_casorati(A, grid, k);
      const Eigen::MatrixXd fit_gap = Ok - L[s(k)] - S[s(k)];
      const Eigen::MatrixXd patch_gap = L[s(k)] - Ak;
      ZO[s(k)] += rho * fit_gap;
      ZA[s(k)] += rho * patch_gap;
      r_fit = std::max(r_fit, fit_gap.cwiseAbs().maxCoeff());
      r_patch = std::max(r_patch, patch_gap.cwiseAbs().maxCoeff());
    }
    rec.r_fit = r_fit;
    rec.r_patch = r_patch;
    if (with_tv) {
      HsiCube cube_gap(O.rows(), O.cols(), bands);
      cube_gap.array() = A.array() - B.array();
      rec.r_cube = cube_gap.array().abs().maxCoeff();
      ZB.array() += rho * cube_gap.array();
      const GradientStack DB = apply_D(B, config.weights);
      GradientStack tv_gap = zero_stack(O.rows(), O.cols(), bands);
      tv_gap.x.array() = C.x.array() - DB.x.array();
      tv_gap.y.array() = C.y.array() - DB.y.array();
      tv_gap.z.array() = C.z.array() - DB.z.array();
      rec.r_tv = stack_abs_max(tv_gap);
      ZC.x.array() += rho * tv_gap.x.array();
      ZC.y.array() += rho * tv_gap.y.array();
      ZC.z.array() += rho * tv_gap.z.array();
    }
    rho = std::min(rho * config.kappa, config.rho_max);

    if (!std::isfinite(rec.r_fit) || !std::isfinite(rec.r_patch) ||
        !std::isfinite(rec.r_cube) || !std::isfinite(rec.r_tv) || !A.all_finite()) {
      fail(Status::numeric_failure,
           "solver produced non-finite values at iteration " + std::to_string(t));
    }

    if (trace_reference != nullptr) {
      const HsiCube current = average_patches(L, grid, bands);
      const MetricsReport m = compute_metrics(*trace_reference, current);
      rec.has_metrics = true;
      rec.mpsnr = m.mpsnr;
      rec.mssim = m.mssim;
      rec.ergas = m.ergas;
    }
    result.trace.records.push_back(rec);
    result.iterations_used = t;
    if (rec.max_residual() <= config.epsilon) {
      result.converged = true;
      break;
    }
  }

  result.denoised = average_patches(L, grid, bands);
  result.sparse = average_patches(S, grid, bands);
  return result;
}

}  // namespace l3s3tv
