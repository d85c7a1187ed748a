#pragma once

#include <Eigen/Dense>

#include "core/cube.hpp"

namespace l3s3tv {

// Sum over columns of log(1 + ||a_j||_2). Zero iff A is zero, and never
// exceeds the l2,1 norm.
double l2log_norm(const Eigen::MatrixXd& A);

// Sum over singular values of log(1 + sigma_s). Zero iff A is zero.
double logdet_norm(const Eigen::MatrixXd& A);

// Minimizer of f(x) = 0.5*(x - r)^2 + alpha*log(1 + x) over x >= 0 for
// r >= 0: xi = (r-1)/2 + sqrt((1+r)^2/4 - alpha) when the square root is
// real, xi > 0 and f(xi) <= f(0), else 0. Shared by the column and the
// singular-value shrinkages.
double log_shrink_magnitude(double r, double alpha);

// Column-wise shrinkage of the l2,log norm: each column y is scaled to
// magnitude log_shrink_magnitude(||y||, alpha) along its own direction.
Eigen::MatrixXd l2log_shrink(const Eigen::MatrixXd& Y, double alpha);

// Singular-value shrinkage of the log-det surrogate: thin SVD, each sigma
// replaced by log_shrink_magnitude(sigma, delta), reassembled.
Eigen::MatrixXd logdet_svt(const Eigen::MatrixXd& X, double delta);

// sign(x) * max(|x| - theta, 0)
double soft_threshold(double x, double theta);
void soft_threshold_inplace(HsiCube& cube, double theta);

// Nuclear-norm singular value thresholding, sigma <- max(sigma - theta, 0).
Eigen::MatrixXd nuclear_svt(const Eigen::MatrixXd& X, double theta);

// Column-wise l2,1 shrinkage, y <- max(1 - theta/||y||, 0) * y.
Eigen::MatrixXd l21_shrink(const Eigen::MatrixXd& Y, double theta);

}  // namespace l3s3tv
