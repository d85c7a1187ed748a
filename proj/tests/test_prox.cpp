#include <cmath>

#include "core/oracles.hpp"
#include "core/prox.hpp"
#include "core/rng.hpp"
#include "doctest.h"

using namespace l3s3tv;

namespace {

double column_objective(double x, double r, double alpha) {
  return 0.5 * (x - r) * (x - r) + alpha * std::log1p(x);
}

Eigen::MatrixXd random_matrix(Index rows, Index cols, std::uint64_t seed) {
  SplitMix64 rng(seed);
  return Eigen::MatrixXd::NullaryExpr(rows, cols,
                                      [&]() { return rng.next_uniform(-2, 2); });
}

}  // namespace

TEST_CASE("l2log_norm on pinned inputs") {
  CHECK(l2log_norm(Eigen::MatrixXd::Zero(3, 4)) == 0.0);

  Eigen::MatrixXd col(2, 1);
  col << 1, 0;
  CHECK(l2log_norm(col) == doctest::Approx(std::log(2.0)));

  Eigen::MatrixXd two(1, 2);
  two << 3, 4;
  CHECK(l2log_norm(two) == doctest::Approx(std::log(4.0) + std::log(5.0)));
  CHECK(l2log_norm(two) < 7.0);  // strictly below the l2,1 norm
}

TEST_CASE("logdet_norm on pinned inputs and against the eigen-oracle") {
  CHECK(logdet_norm(Eigen::MatrixXd::Zero(2, 5)) == 0.0);
  CHECK(logdet_norm(Eigen::MatrixXd::Identity(2, 2)) ==
        doctest::Approx(2.0 * std::log(2.0)));

  Eigen::MatrixXd A = random_matrix(4, 3, 11);
  std::vector<double> eig = oracle::jacobi_eigenvalues(A.transpose() * A);
  double expected = 0.0;
  for (double e : eig) expected += std::log1p(std::sqrt(std::max(e, 0.0)));
  CHECK(logdet_norm(A) == doctest::Approx(expected).epsilon(1e-10));

  // Orthogonal invariance: a rotation leaves the singular values alone.
  Eigen::MatrixXd rot(4, 4);
  rot.setIdentity();
  const double c = std::cos(0.7), s = std::sin(0.7);
  rot(0, 0) = c; rot(0, 1) = -s; rot(1, 0) = s; rot(1, 1) = c;
  CHECK(logdet_norm(rot * A) == doctest::Approx(logdet_norm(A)).epsilon(1e-10));
}

TEST_CASE("l2log triangle inequality holds on random pairs") {
  SplitMix64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::MatrixXd A = random_matrix(3, 4, rng.next_u64());
    Eigen::MatrixXd B = random_matrix(3, 4, rng.next_u64());
    CHECK(l2log_norm(A + B) <= l2log_norm(A) + l2log_norm(B) + 1e-12);
  }
}

TEST_CASE("log_shrink_magnitude against the 1-D scan oracle") {
  SplitMix64 rng(13);
  for (int trial = 0; trial < 1000; ++trial) {
    const double r = rng.next_uniform(0.0, 8.0);
    const double alpha = rng.next_uniform(0.0, 4.0);
    const double xi = log_shrink_magnitude(r, alpha);
    REQUIRE(xi >= 0.0);
    REQUIRE(xi <= r + 1e-12);
    oracle::ScanResult scan = oracle::scan_minimize(
        [&](double x) { return column_objective(x, r, alpha); }, 0.0, r + 1.0);
    REQUIRE(column_objective(xi, r, alpha) <= scan.value + 1e-8);
  }

  // Monotone in alpha for a fixed input.
  double prev = log_shrink_magnitude(3.0, 0.0);
  for (double alpha = 0.25; alpha <= 5.0; alpha += 0.25) {
    const double cur = log_shrink_magnitude(3.0, alpha);
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
}

TEST_CASE("l2log_shrink pinned examples") {
  Eigen::MatrixXd Y = random_matrix(4, 3, 14);
  CHECK((l2log_shrink(Y, 0.0) - Y).cwiseAbs().maxCoeff() == 0.0);

  // (1+r)^2/4 = 0.3025 <= alpha = 1 forces the zero column.
  Eigen::MatrixXd small(2, 1);
  small << 0.06, 0.08;  // norm 0.1
  CHECK(l2log_shrink(small, 1.0).cwiseAbs().maxCoeff() == 0.0);

  // r = 3, alpha = 0.5: direction preserved, magnitude from the 1-D problem.
  Eigen::MatrixXd col(2, 1);
  col << 3.0, 0.0;
  Eigen::MatrixXd out = l2log_shrink(col, 0.5);
  oracle::ScanResult scan = oracle::scan_minimize(
      [&](double x) { return column_objective(x, 3.0, 0.5); }, 0.0, 3.0);
  CHECK(out(0, 0) == doctest::Approx(scan.argmin).epsilon(1e-6));
  CHECK(out(1, 0) == 0.0);

  Eigen::MatrixXd with_zero(2, 2);
  with_zero << 0, 3, 0, 4;
  Eigen::MatrixXd shrunk = l2log_shrink(with_zero, 0.3);
  CHECK(shrunk(0, 0) == 0.0);
  CHECK(shrunk(1, 0) == 0.0);
  // Nonzero column keeps its direction.
  CHECK(shrunk(1, 1) / shrunk(0, 1) == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("l2log_shrink never grows a column and zero maps to zero") {
  SplitMix64 rng(15);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::MatrixXd Y = random_matrix(5, 4, rng.next_u64());
    const double alpha = rng.next_uniform(0.0, 3.0);
    Eigen::MatrixXd out = l2log_shrink(Y, alpha);
    for (Index j = 0; j < Y.cols(); ++j)
      REQUIRE(out.col(j).norm() <= Y.col(j).norm() + 1e-12);
  }
  CHECK(l2log_shrink(Eigen::MatrixXd::Zero(3, 3), 2.0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("logdet_svt pinned examples") {
  Eigen::MatrixXd X = random_matrix(4, 3, 16);
  CHECK((logdet_svt(X, 0.0) - X).cwiseAbs().maxCoeff() <= 1e-10 * (1 + X.norm()));

  Eigen::MatrixXd tiny = 0.1 * Eigen::MatrixXd::Identity(2, 2);
  CHECK(logdet_svt(tiny, 1.0).cwiseAbs().maxCoeff() == 0.0);

  // diag(5, 2, 0.01) at delta 0.3: every output singular value must match
  // the per-sigma scan oracle.
  Eigen::MatrixXd diag = Eigen::Vector3d(5.0, 2.0, 0.01).asDiagonal();
  Eigen::MatrixXd out = logdet_svt(diag, 0.3);
  for (Index i = 0; i < 3; ++i) {
    oracle::ScanResult scan = oracle::scan_minimize(
        [&](double x) { return column_objective(x, diag(i, i), 0.3); }, 0.0,
        diag(i, i) + 1.0);
    CHECK(out(i, i) == doctest::Approx(scan.argmin).epsilon(1e-6));
  }
  CHECK(out.cwiseAbs().sum() ==
        doctest::Approx(out.diagonal().cwiseAbs().sum()).epsilon(1e-9));
}

TEST_CASE("logdet_svt agrees with the scan oracle on random matrices") {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::MatrixXd X = random_matrix(5, 3, rng.next_u64());
    const double delta = rng.next_uniform(0.0, 2.0);
    ThinSvd svd = thin_svd(X);
    Eigen::VectorXd expected_sigma(svd.singular_values.size());
    for (Index i = 0; i < svd.singular_values.size(); ++i) {
      oracle::ScanResult scan = oracle::scan_minimize(
          [&](double x) {
            return column_objective(x, svd.singular_values(i), delta);
          },
          0.0, svd.singular_values(i) + 1.0);
      expected_sigma(i) = scan.argmin;
    }
    Eigen::MatrixXd expected = svd.left_vectors * expected_sigma.asDiagonal() *
                               svd.right_vectors.transpose();
    REQUIRE((logdet_svt(X, delta) - expected).cwiseAbs().maxCoeff() <= 1e-6);
  }
}

TEST_CASE("soft_threshold scalar rules") {
  CHECK(soft_threshold(0.5, 0.2) == doctest::Approx(0.3));
  CHECK(soft_threshold(-0.5, 0.2) == doctest::Approx(-0.3));
  CHECK(soft_threshold(0.1, 0.2) == 0.0);
  CHECK(soft_threshold(-0.1, 0.2) == 0.0);

  HsiCube cube(1, 3, 1);
  cube.at(0, 0, 0) = 0.5;
  cube.at(0, 1, 0) = -0.5;
  cube.at(0, 2, 0) = 0.1;
  soft_threshold_inplace(cube, 0.2);
  CHECK(cube.at(0, 0, 0) == doctest::Approx(0.3));
  CHECK(cube.at(0, 1, 0) == doctest::Approx(-0.3));
  CHECK(cube.at(0, 2, 0) == 0.0);
}

TEST_CASE("nuclear_svt subtracts theta from each singular value") {
  Eigen::MatrixXd X = random_matrix(4, 4, 18);
  CHECK((nuclear_svt(X, 0.0) - X).cwiseAbs().maxCoeff() <= 1e-10 * (1 + X.norm()));

  Eigen::MatrixXd diag = Eigen::Vector2d(3.0, 1.0).asDiagonal();
  Eigen::MatrixXd out = nuclear_svt(diag, 2.0);
  CHECK(out(0, 0) == doctest::Approx(1.0));
  CHECK(out(1, 1) == doctest::Approx(0.0));

  // Per-sigma objective 0.5(x-sigma)^2 + theta*x is minimized at the output.
  SplitMix64 rng(19);
  for (int trial = 0; trial < 30; ++trial) {
    Eigen::MatrixXd Y = random_matrix(4, 3, rng.next_u64());
    const double theta = rng.next_uniform(0.0, 2.0);
    ThinSvd in = thin_svd(Y);
    ThinSvd shrunk = thin_svd(nuclear_svt(Y, theta));
    for (Index i = 0; i < in.singular_values.size(); ++i) {
      oracle::ScanResult scan = oracle::scan_minimize(
          [&](double x) {
            const double d = x - in.singular_values(i);
            return 0.5 * d * d + theta * x;
          },
          0.0, in.singular_values(i) + 1.0);
      REQUIRE(shrunk.singular_values(i) ==
              doctest::Approx(scan.argmin).epsilon(1e-6));
    }
  }
}

TEST_CASE("l21_shrink scales or kills columns") {
  Eigen::MatrixXd col(2, 1);
  col << 3.0, 0.0;
  CHECK(l21_shrink(col, 1.0)(0, 0) == doctest::Approx(2.0));

  Eigen::MatrixXd small(2, 1);
  small << 0.3, 0.4;  // norm 0.5
  CHECK(l21_shrink(small, 1.0).cwiseAbs().maxCoeff() == 0.0);

  SplitMix64 rng(20);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd y = random_matrix(4, 1, rng.next_u64());
    const double theta = rng.next_uniform(0.0, 2.0);
    const double r = y.norm();
    Eigen::MatrixXd out = l21_shrink(y, theta);
    oracle::ScanResult scan = oracle::scan_minimize(
        [&](double s) {
          const double d = s - r;
          return 0.5 * d * d + theta * s;
        },
        0.0, r + 1.0);
    REQUIRE(out.norm() == doctest::Approx(scan.argmin).epsilon(1e-6));
  }
  CHECK(l21_shrink(Eigen::MatrixXd::Zero(2, 2), 0.5).cwiseAbs().maxCoeff() == 0.0);
}
