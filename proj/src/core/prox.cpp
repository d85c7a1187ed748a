#include "core/prox.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "core/numerics.hpp"

namespace l3s3tv {

double l2log_norm(const Eigen::MatrixXd& A) {
  if (!A.allFinite()) fail(Status::numeric_failure, "l2log_norm: non-finite input");
  double sum = 0.0;
  for (Eigen::Index j = 0; j < A.cols(); ++j) sum += std::log1p(A.col(j).norm());
  return sum;
}

double logdet_norm(const Eigen::MatrixXd& A) {
  const ThinSvd svd = thin_svd(A);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < svd.singular_values.size(); ++i) {
    sum += std::log1p(svd.singular_values[i]);
  }
  return sum;
}

double log_shrink_magnitude(double r, double alpha) {
  if (r <= 0.0) return 0.0;
  if (alpha <= 0.0) return r;
  const double disc = 0.25 * (1.0 + r) * (1.0 + r) - alpha;
  if (disc <= 0.0) return 0.0;  // ties at disc == 0 break toward zero
  const double xi = 0.5 * (r - 1.0) + std::sqrt(disc);
  if (xi <= 0.0) return 0.0;
  const double f_xi = 0.5 * (xi - r) * (xi - r) + alpha * std::log1p(xi);
  const double f_zero = 0.5 * r * r;
  return f_xi <= f_zero ? xi : 0.0;
}

Eigen::MatrixXd l2log_shrink(const Eigen::MatrixXd& Y, double alpha) {
  if (alpha < 0.0 || !std::isfinite(alpha)) fail_argument("l2log_shrink: bad alpha");
  Eigen::MatrixXd out(Y.rows(), Y.cols());
  for (Eigen::Index j = 0; j < Y.cols(); ++j) {
    const double r = Y.col(j).norm();
    const double xi = log_shrink_magnitude(r, alpha);
    if (xi > 0.0) {
      out.col(j) = Y.col(j) * (xi / r);
    } else {
      out.col(j).setZero();
    }
  }
  return out;
}

Eigen::MatrixXd logdet_svt(const Eigen::MatrixXd& X, double delta) {
  if (delta < 0.0 || !std::isfinite(delta)) fail_argument("logdet_svt: bad delta");
  const ThinSvd svd = thin_svd(X);
  Eigen::VectorXd shrunk(svd.singular_values.size());
  for (Eigen::Index i = 0; i < shrunk.size(); ++i) {
    shrunk[i] = log_shrink_magnitude(svd.singular_values[i], delta);
  }
  return svd.left_vectors * shrunk.asDiagonal() * svd.right_vectors.transpose();
}

double soft_threshold(double x, double theta) {
  const double mag = std::abs(x) - theta;
  if (mag <= 0.0) return 0.0;
  return x < 0.0 ? -mag : mag;
}

void soft_threshold_inplace(HsiCube& cube, double theta) {
  if (theta < 0.0 || !std::isfinite(theta)) fail_argument("soft_threshold: bad theta");
  double* v = cube.data();
  for (Index k = 0; k < cube.size(); ++k) v[k] = soft_threshold(v[k], theta);
}

Eigen::MatrixXd nuclear_svt(const Eigen::MatrixXd& X, double theta) {
  if (theta < 0.0 || !std::isfinite(theta)) fail_argument("nuclear_svt: bad theta");
  const ThinSvd svd = thin_svd(X);
  Eigen::VectorXd shrunk = (svd.singular_values.array() - theta).max(0.0);
  return svd.left_vectors * shrunk.asDiagonal() * svd.right_vectors.transpose();
}

Eigen::MatrixXd l21_shrink(const Eigen::MatrixXd& Y, double theta) {
  if (theta < 0.0 || !std::isfinite(theta)) fail_argument("l21_shrink: bad theta");
  Eigen::MatrixXd out(Y.rows(), Y.cols());
  for (Eigen::Index j = 0; j < Y.cols(); ++j) {
    const double r = Y.col(j).norm();
    const double scale = r > theta ? 1.0 - theta / r : 0.0;
    if (scale > 0.0) {
      out.col(j) = Y.col(j) * scale;
    } else {
      out.col(j).setZero();
    }
  }
  return out;
}

}  // namespace l3s3tv
