#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "l1cert/error.hpp"
#include "l1cert/geometry.hpp"

using namespace l1cert;

namespace {

Matrix orthonormal_rows(Index n, Index d, RngStream& rng) {
  return nullspace_basis(gaussian_matrix(n - d, n, rng)).F;
}

}  // namespace

TEST(Lambda, Examples) {
  EXPECT_NEAR(lambda_n(1), std::sqrt(2.0 / std::numbers::pi), 1e-14);
  EXPECT_NEAR(lambda_n(2), std::sqrt(std::numbers::pi / 2.0), 1e-14);
  EXPECT_NEAR(lambda_n(3), 2.0 * std::sqrt(2.0 / std::numbers::pi), 1e-14);
  EXPECT_THROW(lambda_n(0), Error);
}

TEST(Lambda, MonotoneAndBelowSqrtN) {
  for (Index n = 2; n < 500; ++n) {
    EXPECT_GT(lambda_n(n), lambda_n(n - 1));
    EXPECT_LT(lambda_n(n), std::sqrt(static_cast<double>(n)));
  }
}

// Asymptotic series sqrt(n) - 1/(4 sqrt n) + 1/(32 n^{3/2}) + ...
TEST(Lambda, AsymptoticSeries) {
  for (Index n : {100, 1000, 10000}) {
    const double x = static_cast<double>(n);
    const double two_terms = std::sqrt(x) - 1.0 / (4.0 * std::sqrt(x));
    EXPECT_NEAR(lambda_n(n) - two_terms, 1.0 / (32.0 * std::pow(x, 1.5)), 1e-3 / std::pow(x, 1.5));
  }
}

TEST(ML1, Examples) {
  EXPECT_NEAR(m_l1_closed_form(Matrix::Identity(2, 2)), 4.0 / std::numbers::pi, 1e-14);
  const Matrix f{{0.5}, {-2.0}, {1.0}};
  EXPECT_NEAR(m_l1_closed_form(f), 3.5, 1e-14);
  EXPECT_NEAR(m_l1_closed_form(Matrix::Identity(64, 64)), std::sqrt(128.0 / std::numbers::pi),
              0.01 * std::sqrt(128.0 / std::numbers::pi));
}

TEST(ML1, MonteCarloAgrees) {
  RngStream rng(7);
  for (int t = 0; t < 10; ++t) {
    const Matrix F = orthonormal_rows(10 + t, 2 + t % 4, rng);
    const Estimate e = m_k_monte_carlo(F, 20000, rng.derive(t));
    EXPECT_NEAR(e.mean, m_l1_closed_form(F), 3.0 * e.std_error + 1e-12) << "instance " << t;
  }
}

TEST(ML1, MonteCarloDeterministicAcrossWorkers) {
  RngStream rng(70);
  const Matrix F = orthonormal_rows(12, 4, rng);
  const Estimate a = m_k_monte_carlo(F, 3000, RngStream(5), 1);
  const Estimate b = m_k_monte_carlo(F, 3000, RngStream(5), 3);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std_error, b.std_error);
}

TEST(BExact, Examples) {
  EXPECT_NEAR(b_exact_bruteforce(Matrix::Identity(2, 2)), std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(b_exact_bruteforce(Matrix{{3.0}, {-4.0}}), 7.0, 1e-14);
  EXPECT_THROW(b_exact_bruteforce(Matrix::Identity(15, 15)), Error);
}

TEST(Maxcut, SandwichesBruteForce) {
  RngStream rng(12);
  for (int t = 0; t < 8; ++t) {
    const Index n = 6 + t % 8;
    const Matrix F = orthonormal_rows(n, 1 + t % 4, rng);
    const MaxcutBounds mb = b_maxcut(F);
    const double exact = b_exact_bruteforce(F);
    EXPECT_LE(mb.lower, exact + 1e-6) << "instance " << t;
    EXPECT_GE(mb.upper, exact - 1e-6) << "instance " << t;
  }
}

TEST(Maxcut, SingleColumn) {
  const Matrix f = Matrix::Constant(2, 1, 1.0 / std::sqrt(2.0));
  const MaxcutBounds mb = b_maxcut(f);
  EXPECT_NEAR(mb.upper, std::sqrt(2.0), 1e-5);
  EXPECT_NEAR(mb.lower, std::sqrt(2.0 / std::numbers::pi * 2.0), 1e-5);
}

// For K = B_inf^d the dual body is B_1^d, so M* is E max |g_i| / lambda_d,
// estimated here directly.
TEST(MStar, IdentityMatchesDirectEstimate) {
  const Matrix F = Matrix::Identity(2, 2);
  const Estimate e = mstar_estimate(F, 4000, RngStream(3));
  RngStream rng(99);
  double sum = 0.0, sum2 = 0.0;
  const int trials = 200000;
  for (int t = 0; t < trials; ++t) {
    const double v = std::max(std::abs(rng.normal()), std::abs(rng.normal()));
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / trials;
  const double se = std::sqrt((sum2 / trials - mean * mean) / trials);
  const double direct = mean / lambda_n(2);
  EXPECT_NEAR(e.mean, direct, 3.0 * (e.std_error + se / lambda_n(2)));
}

TEST(MStar, StdErrorShrinks) {
  RngStream rng(5);
  const Matrix F = orthonormal_rows(10, 3, rng);
  const Estimate small = mstar_estimate(F, 100, RngStream(1));
  const Estimate big = mstar_estimate(F, 1600, RngStream(1));
  EXPECT_LT(big.std_error, small.std_error);
  EXPECT_NEAR(big.std_error / small.std_error, 0.25, 0.1);
}

TEST(Bounds, Examples) {
  EXPECT_EQ(required_samples(0.1, 0.01), 531);
  EXPECT_THROW(required_samples(0.0, 0.1), Error);
  EXPECT_NEAR(low_mstar_diameter(100, 4, 0.5), 2.5, 1e-14);
  EXPECT_NEAR(dvoretzky_dimension(2.0, 4.0, 100), 25.0, 1e-14);
  EXPECT_NEAR(dvoretzky_dimension(2.0, 4.0, 100, 3.0), 75.0, 1e-14);
  EXPECT_NEAR(dvoretzky_dimension(4.0 / std::numbers::pi, std::sqrt(2.0), 2), 1.6211389382774, 1e-12);
}

TEST(Bounds, LowM) {
  const LowMBound b = low_m_diameter(0.8, 0.25);
  EXPECT_NEAR(b.diameter, std::sqrt(0.75) / 0.3, 1e-12);
  ASSERT_TRUE(b.delta.has_value());
  EXPECT_NEAR(*b.delta, 0.39 / 0.36, 1e-12);
  const LowMBound zero = low_m_diameter(0.5, 0.0, 2.0);
  EXPECT_NEAR(zero.diameter, 4.0, 1e-14);
  EXPECT_FALSE(low_m_diameter(1.2, 0.25).delta.has_value());
  EXPECT_THROW(low_m_diameter(0.5, 0.25), Error);
  EXPECT_THROW(low_m_diameter(0.8, 1.0), Error);
}

TEST(Bounds, SFromDiameter) {
  EXPECT_NEAR(s_from_diameter(0.5), 4.0, 1e-14);
  // For [1 1]: the nullspace section has diameter 2 * s_exact = sqrt(2).
  EXPECT_NEAR(s_from_diameter(std::sqrt(2.0)), 0.5, 1e-14);
  EXPECT_THROW(s_from_diameter(0.0), Error);
}

TEST(Report, SmallInstance) {
  RngStream rng(2);
  const SensingMatrix A(gaussian_matrix(6, 14, rng));
  GeometryOptions o;
  o.samples = 400;
  const GeometryReport r = geometry_report(A, RngStream(4), o);
  EXPECT_EQ(r.n, 14);
  EXPECT_EQ(r.d, 8);
  EXPECT_EQ(r.codim, 4);
  EXPECT_NEAR(r.M_K, m_l1_closed_form(A.nullspace()), 1e-12);
  EXPECT_LE(r.b_K_lower, r.b_K_sdp + 1e-9);
  EXPECT_NEAR(r.lambda, 0.5, 1e-15);
  EXPECT_NEAR(r.M_normalized, r.M_K / r.b_K_sdp, 1e-12);
  // M(K) is an average of ||F y||_1 over the sphere and b(K) its maximum.
  EXPECT_LE(r.M_K, r.b_K_sdp + 1e-6);
}
