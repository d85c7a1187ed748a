#pragma once

#include "core/cube.hpp"
#include "core/numerics.hpp"

namespace l3s3tv {

// Weights of the three difference directions. (1, 1, 0.5) de-emphasizes the
// spectral axis relative to the spatial ones.
struct TvWeights {
  double tau_x = 1.0;
  double tau_y = 1.0;
  double tau_z = 0.5;
};

// Weighted periodic first differences of a cube along rows (x), columns (y)
// and bands (z), each grid already scaled by its tau.
struct GradientStack {
  HsiCube x;
  HsiCube y;
  HsiCube z;

  bool same_shape(const GradientStack& other) const {
    return x.same_shape(other.x) && y.same_shape(other.y) && z.same_shape(other.z);
  }
};

GradientStack zero_stack(Index rows, Index cols, Index bands);

// (D_x u)(i,j,b) = tau_x * (u[i+1 mod M, j, b] - u[i, j, b]), and likewise
// for y over j mod N and z over b mod p.
GradientStack apply_D(const HsiCube& cube, const TvWeights& w);

// Exact adjoint of apply_D: per axis (D^T v)_i = v_{i-1} - v_i with wrap,
// tau-scaled, summed over the three axes.
HsiCube apply_Dt(const GradientStack& stack, const TvWeights& w);

// Sum of absolute entries of the weighted gradient stack.
double sstv_norm(const HsiCube& cube, const TvWeights& w);

// 1 + tau_x^2|lambda_x|^2 + tau_y^2|lambda_y|^2 + tau_z^2|lambda_z|^2 per
// frequency. Real and >= 1 everywhere, so dividing by it is always safe.
struct FourierDenominator {
  HsiCube values;
  TvWeights weights;
};

FourierDenominator precompute_denominator(Index rows, Index cols, Index bands,
                                          const TvWeights& w);

// Solves (D^T D + I) B = D^T (C + ZC/rho) + (A + ZB/rho) in the Fourier
// domain: transform the right-hand side, divide pointwise by denom, invert.
// The inverse must come out real; a large imaginary residue is an error.
HsiCube solve_B(const GradientStack& C, const GradientStack& ZC, const HsiCube& A,
                const HsiCube& ZB, double rho, const FourierDenominator& denom,
                const TvWeights& w);

}  // namespace l3s3tv
