#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "core/cube.hpp"
#include "core/numerics.hpp"
#include "core/sstv.hpp"

// Slow reference implementations that deliberately share no algorithm with
// the production code: the production paths are checked against these, so
// none of them may ever call into prox/numerics shortcuts.
namespace l3s3tv::oracle {

struct ScanResult {
  double argmin = 0.0;
  double value = 0.0;
};

// Dense grid scan over [lo, hi] followed by golden-section refinement of the
// best bracket.
ScanResult scan_minimize(const std::function<double(double)>& f, double lo,
                         double hi, int grid_points = 2001,
                         int refine_iterations = 120);

// Eigenvalues of a symmetric matrix via cyclic Jacobi rotations, descending.
std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd A);

// O(n^2) transform, same unnormalized-forward convention as dft3_forward.
SpectralGrid dft3_forward_direct(const HsiCube& cube);

// Gaussian elimination with partial pivoting.
Eigen::VectorXd dense_solve(Eigen::MatrixXd A, Eigen::VectorXd b);

// (D^T D + I) materialized as a dense matrix acting on vectorized cubes
// (natural storage order), built column by column from the operators.
Eigen::MatrixXd dense_dtd_plus_identity(Index rows, Index cols, Index bands,
                                        const TvWeights& w);

}  // namespace l3s3tv::oracle
