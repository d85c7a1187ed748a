#include "core/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "core/oracles.hpp"
#include "core/prox.hpp"
#include "core/rng.hpp"
#include "core/sstv.hpp"

namespace l3s3tv {

namespace {

std::string describe(double value) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

Eigen::MatrixXd random_matrix(SplitMix64& rng, Eigen::Index rows, Eigen::Index cols,
                              double scale) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = scale * rng.next_gaussian();
  }
  return m;
}

HsiCube random_cube(SplitMix64& rng, Index rows, Index cols, Index bands) {
  HsiCube c(rows, cols, bands);
  for (Index k = 0; k < c.size(); ++k) c.data()[k] = rng.next_gaussian();
  return c;
}

// Worst excess of the implemented column shrinkage objective over the 1-D
// scan minimum; negative or tiny positive means the closed form is optimal.
CheckResult check_column_shrinkage(int trials) {
  SplitMix64 rng(0x5eedc01u);
  double worst = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const Eigen::Index dim = 1 + rng.next_int(0, 7);
    const Eigen::MatrixXd y = random_matrix(rng, dim, 1, rng.next_uniform(0.05, 2.0));
    const double alpha = rng.next_uniform(0.0, 3.0);
    const double r = y.col(0).norm();
    const Eigen::MatrixXd w = l2log_shrink(y, alpha);
    const double impl_value =
        0.5 * (y - w).squaredNorm() + alpha * std::log1p(w.col(0).norm());
    const auto objective = [&](double s) {
      return 0.5 * (s - r) * (s - r) + alpha * std::log1p(s);
    };
    const auto oracle = oracle::scan_minimize(objective, 0.0, r + 1.0);
    worst = std::max(worst, impl_value - oracle.value);
  }
  const double tolerance = 1e-8;
  return {"column_shrinkage_vs_scan", worst <= tolerance, tolerance - worst,
          "worst objective excess " + describe(worst)};
}

CheckResult check_singular_shrinkage(int trials) {
  SplitMix64 rng(0x5eedc02u);
  double worst = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const Eigen::Index rows = 2 + rng.next_int(0, 5);
    const Eigen::Index cols = 2 + rng.next_int(0, 5);
    const Eigen::MatrixXd X = random_matrix(rng, rows, cols, rng.next_uniform(0.1, 2.0));
    const double delta = rng.next_uniform(0.0, 2.0);
    const Eigen::MatrixXd L = logdet_svt(X, delta);
    const double impl_value = 0.5 * (X - L).squaredNorm() + delta * logdet_norm(L);
    const ThinSvd svd = thin_svd(X);
    double oracle_value = 0.0;
    for (Eigen::Index i = 0; i < svd.singular_values.size(); ++i) {
      const double sigma = svd.singular_values[i];
      const auto objective = [&](double s) {
        return 0.5 * (s - sigma) * (s - sigma) + delta * std::log1p(s);
      };
      oracle_value += oracle::scan_minimize(objective, 0.0, sigma + 1.0).value;
    }
    worst = std::max(worst, impl_value - oracle_value);
  }
  const double tolerance = 1e-8;
  return {"singular_shrinkage_vs_scan", worst <= tolerance, tolerance - worst,
          "worst objective excess " + describe(worst)};
}

CheckResult check_triangle_inequality(int trials) {
  SplitMix64 rng(0x5eedc03u);
  double worst_violation = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const Eigen::Index rows = 1 + rng.next_int(0, 5);
    const Eigen::Index cols = 1 + rng.next_int(0, 5);
    const Eigen::MatrixXd A = random_matrix(rng, rows, cols, 1.0);
    const Eigen::MatrixXd B = random_matrix(rng, rows, cols, 1.0);
    const double violation = l2log_norm(A + B) - l2log_norm(A) - l2log_norm(B);
    worst_violation = std::max(worst_violation, violation);
  }
  const double tolerance = 1e-12;
  return {"l2log_triangle_inequality", worst_violation <= tolerance,
          tolerance - worst_violation,
          "worst violation " + describe(worst_violation)};
}

CheckResult check_b_solve(int trials) {
  SplitMix64 rng(0x5eedc04u);
  double worst_residual = 0.0;
  double worst_oracle_gap = 0.0;
  for (int t = 0; t < trials; ++t) {
    const Index M = 2 + static_cast<Index>(rng.next_int(0, 2));
    const Index N = 2 + static_cast<Index>(rng.next_int(0, 2));
    const Index p = 1 + static_cast<Index>(rng.next_int(0, 2));
    TvWeights w;
    w.tau_x = rng.next_uniform(0.2, 1.5);
    w.tau_y = rng.next_uniform(0.2, 1.5);
    w.tau_z = rng.next_uniform(0.0, 1.0);
    GradientStack C = zero_stack(M, N, p);
    C.x = random_cube(rng, M, N, p);
    C.y = random_cube(rng, M, N, p);
    C.z = random_cube(rng, M, N, p);
    GradientStack ZC = zero_stack(M, N, p);
    ZC.x = random_cube(rng, M, N, p);
    ZC.y = random_cube(rng, M, N, p);
    ZC.z = random_cube(rng, M, N, p);
    const HsiCube A = random_cube(rng, M, N, p);
    const HsiCube ZB = random_cube(rng, M, N, p);
    const double rho = rng.next_uniform(0.5, 4.0);
    const FourierDenominator denom = precompute_denominator(M, N, p, w);
    const HsiCube B = solve_B(C, ZC, A, ZB, rho, denom, w);

    GradientStack shifted = zero_stack(M, N, p);
    shifted.x.array() = C.x.array() + ZC.x.array() / rho;
    shifted.y.array() = C.y.array() + ZC.y.array() / rho;
    shifted.z.array() = C.z.array() + ZC.z.array() / rho;
    HsiCube rhs = apply_Dt(shifted, w);
    rhs.array() += A.array() + ZB.array() / rho;

    HsiCube lhs = apply_Dt(apply_D(B, w), w);
    lhs.array() += B.array();
    worst_residual =
        std::max(worst_residual, (lhs.array() - rhs.array()).abs().maxCoeff());

    const Eigen::MatrixXd op = oracle::dense_dtd_plus_identity(M, N, p, w);
    Eigen::VectorXd rhs_vec(rhs.size());
    for (Index k = 0; k < rhs.size(); ++k) rhs_vec[k] = rhs.data()[k];
    const Eigen::VectorXd oracle_b = oracle::dense_solve(op, rhs_vec);
    double gap = 0.0;
    for (Index k = 0; k < B.size(); ++k) gap = std::max(gap, std::abs(B.data()[k] - oracle_b[k]));
    worst_oracle_gap = std::max(worst_oracle_gap, gap);
  }
  const bool passed = worst_residual <= 1e-8 && worst_oracle_gap <= 1e-7;
  return {"b_solve_vs_dense", passed,
          std::min(1e-8 - worst_residual, 1e-7 - worst_oracle_gap),
          "residual " + describe(worst_residual) + ", oracle gap " +
              describe(worst_oracle_gap)};
}

CheckResult check_adjointness(int trials) {
  SplitMix64 rng(0x5eedc05u);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const Index M = 1 + static_cast<Index>(rng.next_int(0, 4));
    const Index N = 1 + static_cast<Index>(rng.next_int(0, 4));
    const Index p = 1 + static_cast<Index>(rng.next_int(0, 3));
    TvWeights w;
    w.tau_x = rng.next_uniform(0.0, 1.5);
    w.tau_y = rng.next_uniform(0.0, 1.5);
    w.tau_z = rng.next_uniform(0.0, 1.5);
    const HsiCube x = random_cube(rng, M, N, p);
    GradientStack y = zero_stack(M, N, p);
    y.x = random_cube(rng, M, N, p);
    y.y = random_cube(rng, M, N, p);
    y.z = random_cube(rng, M, N, p);
    const GradientStack Dx = apply_D(x, w);
    const HsiCube Dty = apply_Dt(y, w);
    const double forward = (Dx.x.array() * y.x.array()).sum() +
                           (Dx.y.array() * y.y.array()).sum() +
                           (Dx.z.array() * y.z.array()).sum();
    const double adjoint = (x.array() * Dty.array()).sum();
    const double norm_scale =
        1.0 + x.array().matrix().norm() *
                  std::sqrt(y.x.array().square().sum() + y.y.array().square().sum() +
                            y.z.array().square().sum());
    worst = std::max(worst, std::abs(forward - adjoint) / norm_scale);
  }
  const double tolerance = 1e-10;
  return {"difference_adjointness", worst <= tolerance, tolerance - worst,
          "worst relative mismatch " + describe(worst)};
}

CheckResult check_dft_roundtrip(int trials) {
  SplitMix64 rng(0x5eedc06u);
  double worst_roundtrip = 0.0;
  double worst_direct = 0.0;
  for (int t = 0; t < trials; ++t) {
    const Index M = 1 + static_cast<Index>(rng.next_int(0, 4));
    const Index N = 1 + static_cast<Index>(rng.next_int(0, 4));
    const Index p = 1 + static_cast<Index>(rng.next_int(0, 3));
    const HsiCube x = random_cube(rng, M, N, p);
    const SpectralGrid X = dft3_forward(x);
    const HsiCube back = dft3_inverse(X);
    const double scale = 1.0 + x.array().abs().maxCoeff();
    worst_roundtrip = std::max(
        worst_roundtrip, (back.array() - x.array()).abs().maxCoeff() / scale);
    const SpectralGrid direct = oracle::dft3_forward_direct(x);
    double gap = 0.0;
    for (Index k = 0; k < X.size(); ++k) {
      gap = std::max(gap, std::abs(X.data()[k] - direct.data()[k]));
    }
    worst_direct = std::max(worst_direct, gap / (1.0 + static_cast<double>(x.size())));
  }
  const bool passed = worst_roundtrip <= 1e-10 && worst_direct <= 1e-9;
  return {"dft_roundtrip_and_direct", passed,
          std::min(1e-10 - worst_roundtrip, 1e-9 - worst_direct),
          "roundtrip " + describe(worst_roundtrip) + ", direct gap " +
              describe(worst_direct)};
}

// Empirical mean of log(1 + ||x||) for d-dimensional draws must sit at
// least 3 standard errors below the closed-form bound.
CheckResult mc_bound(const char* name, int samples, bool normal) {
  SplitMix64 rng(normal ? 0x5eedc07u : 0x5eedc08u);
  const int d = 5;
  double sum = 0.0, sum_sq = 0.0;
  for (int t = 0; t < samples; ++t) {
    double norm_sq = 0.0;
    for (int i = 0; i < d; ++i) {
      const double v = normal ? rng.next_gaussian() : rng.next_double();
      norm_sq += v * v;
    }
    const double value = std::log1p(std::sqrt(norm_sq));
    sum += value;
    sum_sq += value * value;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double variance = std::max(0.0, sum_sq / n - mean * mean);
  const double stderr_mean = std::sqrt(variance / n);
  const double bound =
      normal ? std::pow(2.0, 0.25) *
                   std::exp(std::lgamma(d / 2.0 + 0.25) - std::lgamma(d / 2.0))
             : d / 2.0;
  const double margin_se = (bound - mean) / stderr_mean;
  return {name, margin_se >= 3.0, margin_se - 3.0,
          "mean " + describe(mean) + " vs bound " + describe(bound) + " (" +
              describe(margin_se) + " standard errors)"};
}

}  // namespace

std::string SelfcheckReport::text() const {
  std::string out;
  for (const CheckResult& c : checks) {
    out += "check ";
    out += c.name;
    out += c.passed ? ": pass" : ": FAIL";
    out += " (margin " + describe(c.margin) + "; " + c.detail + ")\n";
  }
  out += all_passed ? "selfcheck: PASS\n" : "selfcheck: FAIL\n";
  return out;
}

SelfcheckReport run_selfcheck(bool deep) {
  const int scale = deep ? 5 : 1;
  SelfcheckReport report;
  report.checks.push_back(check_column_shrinkage(200 * scale));
  report.checks.push_back(check_singular_shrinkage(60 * scale));
  report.checks.push_back(check_triangle_inequality(2000 * scale));
  report.checks.push_back(check_b_solve(10 * scale));
  report.checks.push_back(check_adjointness(100 * scale));
  report.checks.push_back(check_dft_roundtrip(40 * scale));
  report.checks.push_back(mc_bound("expectation_bound_normal", 20000 * scale, true));
  report.checks.push_back(mc_bound("expectation_bound_uniform", 20000 * scale, false));
  report.all_passed = std::all_of(report.checks.begin(), report.checks.end(),
                                  [](const CheckResult& c) { return c.passed; });
  return report;
}

}  // namespace l3s3tv
