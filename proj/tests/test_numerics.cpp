#include <cmath>
#include <complex>

#include "core/numerics.hpp"
#include "core/oracles.hpp"
#include "core/rng.hpp"
#include "doctest.h"

using namespace l3s3tv;

namespace {

HsiCube random_cube(Index rows, Index cols, Index bands, std::uint64_t seed) {
  SplitMix64 rng(seed);
  HsiCube cube(rows, cols, bands);
  for (Index k = 0; k < cube.size(); ++k) cube.data()[k] = rng.next_uniform(-1, 1);
  return cube;
}

Eigen::MatrixXd random_matrix(Index rows, Index cols, std::uint64_t seed) {
  SplitMix64 rng(seed);
  return Eigen::MatrixXd::NullaryExpr(rows, cols,
                                      [&]() { return rng.next_uniform(-2, 2); });
}

// Periodic forward difference along one axis, written directly so the
// transfer-function test does not depend on the sstv module.
HsiCube circular_difference(const HsiCube& u, Axis axis) {
  HsiCube out(u.rows(), u.cols(), u.bands());
  for (Index b = 0; b < u.bands(); ++b)
    for (Index i = 0; i < u.rows(); ++i)
      for (Index j = 0; j < u.cols(); ++j) {
        const Index in = axis == Axis::x ? (i + 1) % u.rows() : i;
        const Index jn = axis == Axis::y ? (j + 1) % u.cols() : j;
        const Index bn = axis == Axis::z ? (b + 1) % u.bands() : b;
        out.at(i, j, b) = u.at(in, jn, bn) - u.at(i, j, b);
      }
  return out;
}

}  // namespace

TEST_CASE("thin_svd on tiny fixed matrices") {
  ThinSvd id = thin_svd(Eigen::MatrixXd::Identity(2, 2));
  REQUIRE(id.singular_values.size() == 2);
  CHECK(id.singular_values(0) == doctest::Approx(1.0));
  CHECK(id.singular_values(1) == doctest::Approx(1.0));

  Eigen::MatrixXd d(2, 2);
  d << 3, 0, 0, 0;
  ThinSvd svd = thin_svd(d);
  CHECK(svd.singular_values(0) == doctest::Approx(3.0));
  CHECK(svd.singular_values(1) == doctest::Approx(0.0));
  CHECK(std::abs(svd.left_vectors(0, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(svd.right_vectors(0, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(svd.left_vectors(1, 0)) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("thin_svd singular values match the Gram eigen-oracle") {
  Eigen::MatrixXd A = random_matrix(5, 3, 2001);
  ThinSvd svd = thin_svd(A);
  std::vector<double> eig = oracle::jacobi_eigenvalues(A.transpose() * A);
  REQUIRE(eig.size() == 3);
  for (Index i = 0; i < 3; ++i) {
    const double sigma_sq = svd.singular_values(i) * svd.singular_values(i);
    CHECK(sigma_sq == doctest::Approx(eig[static_cast<std::size_t>(i)]).epsilon(1e-8));
  }
}

TEST_CASE("thin_svd reconstruction and orthonormality on random shapes") {
  SplitMix64 rng(2002);
  for (int trial = 0; trial < 100; ++trial) {
    const Index a = rng.next_int(1, 40);
    const Index b = rng.next_int(1, 40);
    Eigen::MatrixXd A = random_matrix(a, b, rng.next_u64());
    ThinSvd svd = thin_svd(A);
    const Index r = std::min(a, b);
    REQUIRE(svd.singular_values.size() == r);
    for (Index i = 0; i + 1 < r; ++i)
      REQUIRE(svd.singular_values(i) >= svd.singular_values(i + 1));
    REQUIRE(svd.singular_values(r - 1) >= 0.0);

    const double orth_left =
        (svd.left_vectors.transpose() * svd.left_vectors -
         Eigen::MatrixXd::Identity(r, r)).cwiseAbs().maxCoeff();
    const double orth_right =
        (svd.right_vectors.transpose() * svd.right_vectors -
         Eigen::MatrixXd::Identity(r, r)).cwiseAbs().maxCoeff();
    REQUIRE(orth_left <= 1e-8);
    REQUIRE(orth_right <= 1e-8);

    const double recon =
        (A - svd.left_vectors * svd.singular_values.asDiagonal() *
                 svd.right_vectors.transpose()).norm();
    REQUIRE(recon <= 1e-8 * (1.0 + A.norm()));
  }

  Eigen::MatrixXd bad(1, 1);
  bad << std::nan("");
  CHECK_THROWS_AS((void)thin_svd(bad), Error);
}

TEST_CASE("dft3 of a constant cube concentrates at DC") {
  HsiCube cube(3, 2, 2, 0.75);
  SpectralGrid grid = dft3_forward(cube);
  CHECK(grid.at(0, 0, 0).real() == doctest::Approx(0.75 * 12));
  CHECK(grid.at(0, 0, 0).imag() == doctest::Approx(0.0));
  double off_dc = 0.0;
  for (Index b = 0; b < 2; ++b)
    for (Index i = 0; i < 3; ++i)
      for (Index j = 0; j < 2; ++j)
        if (i != 0 || j != 0 || b != 0) off_dc += std::abs(grid.at(i, j, b));
  CHECK(off_dc <= 1e-10);
}

TEST_CASE("dft3 of a delta is an all-ones spectrum") {
  HsiCube cube(2, 3, 2, 0.0);
  cube.at(0, 0, 0) = 1.0;
  SpectralGrid grid = dft3_forward(cube);
  for (Index b = 0; b < 2; ++b)
    for (Index i = 0; i < 2; ++i)
      for (Index j = 0; j < 3; ++j) {
        CHECK(grid.at(i, j, b).real() == doctest::Approx(1.0));
        CHECK(grid.at(i, j, b).imag() == doctest::Approx(0.0));
      }
}

TEST_CASE("dft3 round trip, direct-DFT oracle, Parseval, Hermitian symmetry") {
  HsiCube cube = random_cube(4, 4, 4, 3003);
  SpectralGrid grid = dft3_forward(cube);

  SpectralGrid direct = oracle::dft3_forward_direct(cube);
  double oracle_gap = 0.0;
  double grid_energy = 0.0, cube_energy = 0.0;
  for (Index b = 0; b < 4; ++b)
    for (Index i = 0; i < 4; ++i)
      for (Index j = 0; j < 4; ++j) {
        oracle_gap = std::max(oracle_gap,
                              std::abs(grid.at(i, j, b) - direct.at(i, j, b)));
        grid_energy += std::norm(grid.at(i, j, b));
        // Hermitian symmetry of a real input: X[k] = conj(X[n-k]).
        const std::complex<double> mirrored =
            grid.at((4 - i) % 4, (4 - j) % 4, (4 - b) % 4);
        REQUIRE(std::abs(grid.at(i, j, b) - std::conj(mirrored)) <= 1e-9);
      }
  CHECK(oracle_gap <= 1e-10 * (1.0 + std::sqrt(grid_energy)));

  for (Index k = 0; k < cube.size(); ++k)
    cube_energy += cube.data()[k] * cube.data()[k];
  CHECK(grid_energy ==
        doctest::Approx(cube_energy * 64).epsilon(1e-9));  // MNp = 64

  double max_imag = 0.0;
  HsiCube back = dft3_inverse(grid, &max_imag);
  double roundtrip = 0.0;
  for (Index k = 0; k < cube.size(); ++k)
    roundtrip = std::max(roundtrip, std::abs(back.data()[k] - cube.data()[k]));
  CHECK(roundtrip <= 1e-10);
  CHECK(max_imag <= 1e-9);
}

TEST_CASE("dft3 handles non-power-of-two sizes") {
  HsiCube cube = random_cube(5, 7, 3, 3004);
  HsiCube back = dft3_inverse(dft3_forward(cube));
  for (Index k = 0; k < cube.size(); ++k)
    REQUIRE(back.data()[k] == doctest::Approx(cube.data()[k]).epsilon(1e-10));
}

TEST_CASE("difference_transfer values at pinned frequencies") {
  SpectralGrid lx = difference_transfer(Axis::x, 2, 3, 4);
  CHECK(std::abs(lx.at(0, 0, 0)) == doctest::Approx(0.0));  // constants die
  CHECK(lx.at(1, 0, 0).real() == doctest::Approx(-2.0));    // e^{i pi} - 1
  CHECK(lx.at(1, 0, 0).imag() == doctest::Approx(0.0));
  CHECK(std::norm(lx.at(1, 2, 3)) == doctest::Approx(4.0));  // broadcast

  SpectralGrid lz = difference_transfer(Axis::z, 2, 2, 8);
  for (Index k = 0; k < 8; ++k) {
    const double expected = 2.0 - 2.0 * std::cos(2.0 * M_PI * k / 8.0);
    CHECK(std::norm(lz.at(1, 1, k)) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("difference_transfer diagonalizes the periodic difference") {
  SplitMix64 rng(3005);
  for (Axis axis : {Axis::x, Axis::y, Axis::z}) {
    const Index M = rng.next_int(2, 6);
    const Index N = rng.next_int(2, 6);
    const Index p = rng.next_int(2, 6);
    HsiCube x = random_cube(M, N, p, rng.next_u64());
    SpectralGrid lhs = dft3_forward(circular_difference(x, axis));
    SpectralGrid fx = dft3_forward(x);
    SpectralGrid lambda = difference_transfer(axis, M, N, p);
    for (Index b = 0; b < p; ++b)
      for (Index i = 0; i < M; ++i)
        for (Index j = 0; j < N; ++j)
          REQUIRE(std::abs(lhs.at(i, j, b) -
                           lambda.at(i, j, b) * fx.at(i, j, b)) <= 1e-9);
  }
}
