#include "core/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/errors.hpp"

namespace l3s3tv::oracle {

ScanResult scan_minimize(const std::function<double(double)>& f, double lo,
                         double hi, int grid_points, int refine_iterations) {
  if (!(lo <= hi)) fail_argument("scan_minimize: empty interval");
  if (grid_points < 2) fail_argument("scan_minimize: need at least 2 grid points");
  const double step = (hi - lo) / static_cast<double>(grid_points - 1);
  double best_x = lo;
  double best_f = f(lo);
  for (int i = 1; i < grid_points; ++i) {
    const double x = lo + step * i;
    const double fx = f(x);
    if (fx < best_f) {
      best_f = fx;
      best_x = x;
    }
  }
  // Golden-section refinement inside the bracket around the grid winner.
  double a = std::max(lo, best_x - step);
  double b = std::min(hi, best_x + step);
  constexpr double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < refine_iterations; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double mid = 0.5 * (a + b);
  const double fmid = f(mid);
  if (fmid < best_f) return {mid, fmid};
  return {best_x, best_f};
}

std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd A) {
  const Eigen::Index n = A.rows();
  if (n != A.cols()) fail_argument("jacobi_eigenvalues: matrix not square");
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + A.cwiseAbs().maxCoeff())) {
    fail_argument("jacobi_eigenvalues: matrix not symmetric");
  }
  A = 0.5 * (A + A.transpose().eval());
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
    }
    if (std::sqrt(off) <= 1e-15 * scale) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(A(p, q)) <= 1e-300) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> eigenvalues(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) eigenvalues[static_cast<std::size_t>(i)] = A(i, i);
  std::sort(eigenvalues.begin(), eigenvalues.end(), std::greater<>());
  return eigenvalues;
}

SpectralGrid dft3_forward_direct(const HsiCube& cube) {
  const Index M = cube.rows(), N = cube.cols(), p = cube.bands();
  SpectralGrid out(M, N, p);
  for (Index kb = 0; kb < p; ++kb) {
    for (Index ki = 0; ki < M; ++ki) {
      for (Index kj = 0; kj < N; ++kj) {
        std::complex<double> acc(0.0, 0.0);
        for (Index b = 0; b < p; ++b) {
          for (Index i = 0; i < M; ++i) {
            for (Index j = 0; j < N; ++j) {
              const double phase =
                  -2.0 * std::numbers::pi *
                  (static_cast<double>(ki * i) / static_cast<double>(M) +
                   static_cast<double>(kj * j) / static_cast<double>(N) +
                   static_cast<double>(kb * b) / static_cast<double>(p));
              acc += cube.at(i, j, b) *
                     std::complex<double>(std::cos(phase), std::sin(phase));
            }
          }
        }
        out.at(ki, kj, kb) = acc;
      }
    }
  }
  return out;
}

Eigen::VectorXd dense_solve(Eigen::MatrixXd A, Eigen::VectorXd b) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || b.size() != n) fail_argument("dense_solve: shape mismatch");
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = col;
    for (Eigen::Index r = col + 1; r < n; ++r) {
      if (std::abs(A(r, col)) > std::abs(A(pivot, col))) pivot = r;
    }
    if (std::abs(A(pivot, col)) < 1e-300) {
      fail(Status::numeric_failure, "dense_solve: singular matrix");
    }
    if (pivot != col) {
      A.row(pivot).swap(A.row(col));
      std::swap(b[pivot], b[col]);
    }
    for (Eigen::Index r = col + 1; r < n; ++r) {
      const double factor = A(r, col) / A(col, col);
      if (factor == 0.0) continue;
      A.row(r).tail(n - col) -= factor * A.row(col).tail(n - col);
      b[r] -= factor * b[col];
    }
  }
  Eigen::VectorXd x(n);
  for (Eigen::Index r = n - 1; r >= 0; --r) {
    double acc = b[r];
    for (Eigen::Index c = r + 1; c < n; ++c) acc -= A(r, c) * x[c];
    x[r] = acc / A(r, r);
  }
  return x;
}

Eigen::MatrixXd dense_dtd_plus_identity(Index rows, Index cols, Index bands,
                                        const TvWeights& w) {
  const Index n = rows * cols * bands;
  Eigen::MatrixXd A(n, n);
  HsiCube basis(rows, cols, bands);
  for (Index k = 0; k < n; ++k) {
    basis.array().setZero();
    basis.data()[k] = 1.0;
    const HsiCube column = apply_Dt(apply_D(basis, w), w);
    for (Index r = 0; r < n; ++r) A(r, k) = column.data()[r] + (r == k ? 1.0 : 0.0);
  }
  return A;
}

}  // namespace l3s3tv::oracle
