#include "core/sstv.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace l3s3tv {

namespace {

void check_weights(const TvWeights& w) {
  const bool ok = std::isfinite(w.tau_x) && std::isfinite(w.tau_y) &&
                  std::isfinite(w.tau_z) && w.tau_x >= 0.0 && w.tau_y >= 0.0 &&
                  w.tau_z >= 0.0;
  if (!ok) fail_argument("tv weights must be finite and nonnegative");
}

}  // namespace

GradientStack zero_stack(Index rows, Index cols, Index bands) {
  return {HsiCube(rows, cols, bands), HsiCube(rows, cols, bands),
          HsiCube(rows, cols, bands)};
}

GradientStack apply_D(const HsiCube& cube, const TvWeights& w) {
  check_weights(w);
  const Index M = cube.rows(), N = cube.cols(), p = cube.bands();
  GradientStack out = zero_stack(M, N, p);
  for (Index b = 0; b < p; ++b) {
    const Index bn = b + 1 == p ? 0 : b + 1;
    for (Index i = 0; i < M; ++i) {
      const Index in = i + 1 == M ? 0 : i + 1;
      for (Index j = 0; j < N; ++j) {
        const Index jn = j + 1 == N ? 0 : j + 1;
        const double v = cube.at(i, j, b);
        out.x.at(i, j, b) = w.tau_x * (cube.at(in, j, b) - v);
        out.y.at(i, j, b) = w.tau_y * (cube.at(i, jn, b) - v);
        out.z.at(i, j, b) = w.tau_z * (cube.at(i, j, bn) - v);
      }
    }
  }
  return out;
}

HsiCube apply_Dt(const GradientStack& stack, const TvWeights& w) {
  check_weights(w);
  if (!stack.x.same_shape(stack.y) || !stack.x.same_shape(stack.z)) {
    fail_argument("apply_Dt: stack grids disagree in shape");
  }
  const Index M = stack.x.rows(), N = stack.x.cols(), p = stack.x.bands();
  HsiCube out(M, N, p);
  for (Index b = 0; b < p; ++b) {
    const Index bp = b == 0 ? p - 1 : b - 1;
    for (Index i = 0; i < M; ++i) {
      const Index ip = i == 0 ? M - 1 : i - 1;
      for (Index j = 0; j < N; ++j) {
        const Index jp = j == 0 ? N - 1 : j - 1;
        out.at(i, j, b) = w.tau_x * (stack.x.at(ip, j, b) - stack.x.at(i, j, b)) +
                          w.tau_y * (stack.y.at(i, jp, b) - stack.y.at(i, j, b)) +
                          w.tau_z * (stack.z.at(i, j, bp) - stack.z.at(i, j, b));
      }
    }
  }
  return out;
}

double sstv_norm(const HsiCube& cube, const TvWeights& w) {
  const GradientStack g = apply_D(cube, w);
  return g.x.array().abs().sum() + g.y.array().abs().sum() + g.z.array().abs().sum();
}

FourierDenominator precompute_denominator(Index rows, Index cols, Index bands,
                                          const TvWeights& w) {
  check_weights(w);
  const SpectralGrid lx = difference_transfer(Axis::x, rows, cols, bands);
  const SpectralGrid ly = difference_transfer(Axis::y, rows, cols, bands);
  const SpectralGrid lz = difference_transfer(Axis::z, rows, cols, bands);
  FourierDenominator denom{HsiCube(rows, cols, bands), w};
  for (Index k = 0; k < denom.values.size(); ++k) {
    denom.values.data()[k] = 1.0 + w.tau_x * w.tau_x * std::norm(lx.data()[k]) +
                             w.tau_y * w.tau_y * std::norm(ly.data()[k]) +
                             w.tau_z * w.tau_z * std::norm(lz.data()[k]);
  }
  return denom;
}

HsiCube solve_B(const GradientStack& C, const GradientStack& ZC, const HsiCube& A,
                const HsiCube& ZB, double rho, const FourierDenominator& denom,
                const TvWeights& w) {
  if (rho <= 0.0 || !std::isfinite(rho)) fail_argument("solve_B: rho must be positive");
  if (!C.same_shape(ZC) || !C.x.same_shape(A) || !A.same_shape(ZB) ||
      !A.same_shape(denom.values)) {
    fail_argument("solve_B: shape mismatch");
  }
  if (denom.weights.tau_x != w.tau_x || denom.weights.tau_y != w.tau_y ||
      denom.weights.tau_z != w.tau_z) {
    fail_argument("solve_B: denominator was precomputed for different tv weights");
  }
  const double inv_rho = 1.0 / rho;
  GradientStack shifted = zero_stack(A.rows(), A.cols(), A.bands());
  shifted.x.array() = C.x.array() + ZC.x.array() * inv_rho;
  shifted.y.array() = C.y.array() + ZC.y.array() * inv_rho;
  shifted.z.array() = C.z.array() + ZC.z.array() * inv_rho;
  HsiCube rhs = apply_Dt(shifted, w);
  rhs.array() += A.array() + ZB.array() * inv_rho;
  const double rhs_scale = rhs.array().abs().maxCoeff();

  SpectralGrid spectrum = dft3_forward(rhs);
  for (Index k = 0; k < spectrum.size(); ++k) {
    spectrum.data()[k] /= denom.values.data()[k];
  }
  double max_imag = 0.0;
  HsiCube B = dft3_inverse(spectrum, &max_imag);
  if (max_imag > 1e-9 * (1.0 + rhs_scale)) {
    fail(Status::numeric_failure, "solve_B: inverse transform is not real");
  }
  return B;
}

}  // namespace l3s3tv
