#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "l1cert/error.hpp"
#include "l1cert/l1_projection.hpp"
#include "l1cert/linalg.hpp"
#include "l1cert/matrix_io.hpp"

using namespace l1cert;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an l1cert::Error";
  return ErrorKind::SolverFailure;
}

Matrix random_symmetric(Index n, RngStream& rng) { return symmetrize(gaussian_matrix(n, n, rng)); }

}  // namespace

TEST(Nullspace, OneByTwo) {
  const NullspaceBasis nb = nullspace_basis(Matrix{{1.0, 1.0}});
  ASSERT_EQ(nb.dim(), 1);
  EXPECT_NEAR(nb.F(0, 0), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(nb.F(1, 0), -1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Nullspace, TwoByThree) {
  const NullspaceBasis nb = nullspace_basis(Matrix{{1, 0, 1}, {0, 1, 1}});
  ASSERT_EQ(nb.dim(), 1);
  const double s = 1.0 / std::sqrt(3.0);
  EXPECT_NEAR(nb.F(0, 0), s, 1e-15);
  EXPECT_NEAR(nb.F(1, 0), s, 1e-15);
  EXPECT_NEAR(nb.F(2, 0), -s, 1e-15);
}

TEST(Nullspace, Errors) {
  EXPECT_EQ(kind_of([] { nullspace_basis(Matrix::Identity(2, 2)); }), ErrorKind::NotUnderdetermined);
  EXPECT_EQ(kind_of([] { nullspace_basis(Matrix{{1, 1, 1}, {2, 2, 2}}); }), ErrorKind::RankDeficient);
}

TEST(Nullspace, RandomInvariants) {
  RngStream rng(11);
  for (int t = 0; t < 20; ++t) {
    const Index m = 1 + t % 7;
    const Index n = m + 1 + t % 5;
    const Matrix A = gaussian_matrix(m, n, rng);
    const NullspaceBasis nb = nullspace_basis(A);
    ASSERT_EQ(nb.dim(), n - m);
    EXPECT_LE((A * nb.F).norm(), 1e-10 * A.norm());
    EXPECT_LE((nb.F.transpose() * nb.F - Matrix::Identity(n - m, n - m)).norm(), 1e-10);
    for (Index j = 0; j < nb.dim(); ++j) {
      Index first = 0;
      while (std::abs(nb.F(first, j)) <= 1e-12) ++first;
      EXPECT_GT(nb.F(first, j), 0.0);
    }
  }
}

TEST(ProjectPsd, Examples) {
  const Matrix P = project_psd(Matrix{{0, 1}, {1, 0}});
  EXPECT_NEAR((P - Matrix::Constant(2, 2, 0.5)).norm(), 0.0, 1e-14);
  EXPECT_NEAR((project_psd(Matrix::Identity(2, 2)) - Matrix::Identity(2, 2)).norm(), 0.0, 1e-14);
  EXPECT_NEAR(project_psd(-Matrix::Identity(2, 2)).norm(), 0.0, 1e-14);
}

TEST(ProjectPsd, NonFinite) {
  Matrix M = Matrix::Identity(2, 2);
  M(0, 1) = std::nan("");
  EXPECT_EQ(kind_of([&] { project_psd(M); }), ErrorKind::NonFinite);
}

TEST(ProjectPsd, NearestAndIdempotent) {
  RngStream rng(5);
  for (int t = 0; t < 100; ++t) {
    const Matrix M = random_symmetric(5, rng);
    const Matrix P = project_psd(M);
    EXPECT_LE((project_psd(P) - P).norm(), 1e-10);
    EXPECT_GE(symmetric_eigen(P).values.minCoeff(), -1e-12);
    for (int s = 0; s < 100; ++s) {
      const Matrix G = gaussian_matrix(5, 5, rng);
      const Matrix Q = G * G.transpose() * rng.uniform();
      EXPECT_LE((M - P).norm(), (M - Q).norm() + 1e-9);
    }
  }
}

TEST(SymmetricEigen, Reconstruction) {
  RngStream rng(8);
  for (Index n : {1, 2, 7, 16, 33, 64}) {
    const Matrix M = random_symmetric(n, rng);
    const SymmetricEigen e = symmetric_eigen(M);
    const Matrix R = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
    EXPECT_LE((R - M).norm(), 1e-9 * M.norm());
    for (Index i = 1; i < n; ++i) EXPECT_LE(e.values(i - 1), e.values(i));
  }
}

TEST(Random, Determinism) {
  RngStream a(42), b(42), c(42, 1);
  const Matrix A = gaussian_matrix(2, 4, a);
  const Matrix B = gaussian_matrix(2, 4, b);
  const Matrix C = gaussian_matrix(2, 4, c);
  EXPECT_EQ(A, B);
  EXPECT_NE(A, C);
  const RngStream parent(3);
  RngStream d1 = parent.derive(9), d2 = parent.derive(9), d3 = parent.derive(10);
  const auto x1 = d1.next_u64();
  EXPECT_EQ(x1, d2.next_u64());
  EXPECT_NE(x1, d3.next_u64());
}

TEST(Random, GaussianMean) {
  RngStream rng(1);
  const Matrix A = gaussian_matrix(1, 10000, rng);
  // 3 sigma / sqrt(n) = 0.03; the stated window is 0.05.
  EXPECT_LE(std::abs(A.mean()), 0.05);
  EXPECT_NEAR(A.array().square().mean(), 1.0, 0.05);
}

TEST(Random, Rademacher) {
  RngStream rng(2);
  const Matrix A = rademacher_matrix(20, 50, rng);
  for (Index i = 0; i < A.size(); ++i) EXPECT_EQ(std::abs(A.data()[i]), 1.0);
  EXPECT_LE(std::abs(A.mean()), 3.0 / std::sqrt(1000.0));
}

TEST(Random, RejectsEmpty) {
  RngStream rng(0);
  EXPECT_EQ(kind_of([&] { gaussian_matrix(0, 3, rng); }), ErrorKind::DomainError);
  EXPECT_EQ(kind_of([&] { rademacher_matrix(3, 0, rng); }), ErrorKind::DomainError);
}

TEST(Random, UniformRangeAndMoments) {
  RngStream rng(6);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000.0, 0.5, 3.0 * std::sqrt(1.0 / 12.0 / 100000.0));
}

TEST(MatrixIo, RoundTripIsBitwise) {
  RngStream rng(77);
  const Matrix A = gaussian_matrix(5, 9, rng) * 1e-3;
  std::stringstream ss;
  write_matrix(ss, A);
  const Matrix B = read_matrix(ss);
  ASSERT_EQ(B.rows(), 5);
  ASSERT_EQ(B.cols(), 9);
  for (Index i = 0; i < A.size(); ++i) EXPECT_EQ(A.data()[i], B.data()[i]);
}

TEST(MatrixIo, ParseErrors) {
  std::stringstream bad("2 2\n1 2\n3\n");
  EXPECT_EQ(kind_of([&] { read_matrix(bad); }), ErrorKind::ParseError);
  std::stringstream nan("1 2\n1 nan\n");
  EXPECT_NE(kind_of([&] { read_matrix(nan); }), ErrorKind::SolverFailure);
  EXPECT_EQ(kind_of([] { read_matrix_file("/nonexistent/matrix.txt"); }), ErrorKind::ConfigError);
}

TEST(PairwiseSum, MatchesNaiveOnIntegers) {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  EXPECT_EQ(pairwise_sum(v.data(), v.size()), 999.0 * 1000.0 / 2.0);
  EXPECT_EQ(pairwise_sum(v.data(), 0), 0.0);
}

// Oracle: the projection is soft thresholding at the tau solving
// sum_i w_i max(|v_i| - tau, 0) = r, located here by bisection.
TEST(L1Projection, MatchesBisection) {
  RngStream rng(13);
  for (int t = 0; t < 50; ++t) {
    const Index n = 1 + t % 17;
    std::vector<double> v(static_cast<std::size_t>(n)), w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = 3.0 * rng.normal();
      w[i] = 0.5 + 2.0 * rng.uniform();
    }
    const double r = 0.1 + rng.uniform();
    double weighted = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) weighted += w[i] * std::abs(v[i]);
    std::vector<double> p = v;
    project_weighted_l1_ball(p, w, r);
    if (weighted <= r) {
      EXPECT_EQ(p, v);
      continue;
    }
    double lo = 0.0, hi = 0.0;
    for (double x : v) hi = std::max(hi, std::abs(x));
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      double s = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * std::max(std::abs(v[i]) - mid, 0.0);
      (s > r ? lo : hi) = mid;
    }
    const double tau = 0.5 * (lo + hi);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double expect = std::copysign(std::max(std::abs(v[i]) - tau, 0.0), v[i]);
      EXPECT_NEAR(p[i], expect, 1e-10);
    }
  }
}

TEST(L1Projection, SymmetricMatrix) {
  RngStream rng(21);
  const Matrix M = symmetrize(gaussian_matrix(6, 6, rng));
  const Matrix P = project_l1_ball_symmetric(M, 1.0);
  EXPECT_EQ(P, P.transpose());
  EXPECT_NEAR(entrywise_l1(P), 1.0, 1e-12);
  const Matrix small = M / (2.0 * entrywise_l1(M));
  EXPECT_EQ(project_l1_ball_symmetric(small, 1.0), small);
  const Vector v = project_l1_ball(Vector{{3.0, -1.0}}, 1.0);
  EXPECT_NEAR(v(0), 1.0, 1e-15);
  EXPECT_NEAR(v(1), 0.0, 1e-15);
}
