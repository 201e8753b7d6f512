#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "l1cert/error.hpp"
#include "l1cert/weak.hpp"

using namespace l1cert;

TEST(Sampler, Extremes) {
  RngStream rng(1);
  for (int t = 0; t < 20; ++t) EXPECT_EQ(sample_signal({50, 0.0}, rng).cardinality(), 0);
  for (int t = 0; t < 20; ++t) {
    const SparseSignal u = sample_signal({50, 50.0}, rng);
    EXPECT_EQ(u.cardinality(), 50);
    EXPECT_TRUE(u.is_ternary());
  }
}

TEST(Sampler, CardinalityWithinThreeSigma) {
  RngStream rng(2);
  // Binomial(10^4, 0.01): sigma ~ 9.95.
  for (int t = 0; t < 5; ++t) {
    const Index card = sample_signal({10000, 100.0}, rng).cardinality();
    EXPECT_GE(card, 70);
    EXPECT_LE(card, 130);
  }
}

TEST(Sampler, SignsBalanced) {
  RngStream rng(3);
  const SparseSignal u = sample_signal({20000, 10000.0}, rng);
  const double plus = (u.values().array() > 0.0).count();
  // p(+1 | nonzero) = 1/2; 3 sigma window on ~10^4 nonzeros.
  EXPECT_NEAR(plus / static_cast<double>(u.cardinality()), 0.5, 3.0 * 0.5 / std::sqrt(9000.0));
}

TEST(Sampler, RejectsBadModel) {
  RngStream rng(0);
  EXPECT_THROW(sample_signal({10, 11.0}, rng), Error);
  EXPECT_THROW(sample_signal({10, -1.0}, rng), Error);
}

TEST(ExpectedNorm, Examples) {
  EXPECT_NEAR(expected_norm({2, 1.0}), 0.5 + std::sqrt(2.0) / 4.0, 1e-15);
  EXPECT_EQ(expected_norm({7, 0.0}), 0.0);
  EXPECT_NEAR(expected_norm({9, 9.0}), 3.0, 1e-15);
}

TEST(ExpectedNorm, JensenBound) {
  for (Index n : {1, 5, 40, 1000, 100000})
    for (double frac : {0.001, 0.1, 0.5, 0.9}) {
      const double k = frac * static_cast<double>(n);
      if (k <= 0.0) continue;
      EXPECT_LT(expected_norm({n, k}), std::sqrt(k)) << n << " " << k;
    }
}

TEST(ExpectedNorm, AgreesWithSampling) {
  RngStream rng(8);
  const SignalModel model{200, 6.0};
  const int trials = 20000;
  double sum = 0.0, sum2 = 0.0;
  for (int t = 0; t < trials; ++t) {
    const double v = sample_signal(model, rng).values().norm();
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / trials;
  const double se = std::sqrt((sum2 / trials - mean * mean) / trials);
  EXPECT_NEAR(expected_norm(model), mean, 3.0 * se);
}

TEST(MBound, Examples) {
  EXPECT_NEAR(m_bound(0.1, 0.5, 2.0), 0.3, 1e-15);
  EXPECT_EQ(m_bound(0.0, 0.3, 5.0), 0.0);
  EXPECT_NEAR(m_bound(1.0 / std::sqrt(2.0), 0.5, 1.0), 1.0606601717798212, 1e-15);
  EXPECT_THROW(m_bound(0.1, 1.0, 1.0), Error);
  EXPECT_THROW(m_bound(0.1, 0.0, 1.0), Error);
}

TEST(TailBound, Examples) {
  EXPECT_NEAR(tail_bound(0.1, 0.5, 0.2), 4.0 * std::exp(-1.0), 1e-14);
  EXPECT_EQ(tail_bound(0.3, 0.4, 0.4), 4.0);
  EXPECT_EQ(tail_bound(1e-300, 0.5, 0.1), 0.0);
  EXPECT_EQ(tail_bound(0.0, 0.5, 0.1), 0.0);
  EXPECT_THROW(tail_bound(0.1, 0.5, 0.6), Error);
}

TEST(TailBound, Monotonicity) {
  const double M = 0.05;
  double prev = 5.0;
  for (int i = 6; i < 100; ++i) {
    const double v = tail_bound(0.1, i / 100.0, M);
    EXPECT_LE(v, prev);
    prev = v;
  }
  prev = 0.0;
  for (int i = 1; i < 50; ++i) {
    const double v = tail_bound(i / 100.0, 0.5, M);
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(RecoveryCondition, Examples) {
  const double threshold = 1.0 / (2.0 + 2.0 + 4.0 * std::sqrt(std::numbers::pi));
  EXPECT_NEAR(threshold, 0.090172, 1e-6);
  const RecoveryCondition a = recovery_condition(0.05, 2.0, 1.0);
  EXPECT_TRUE(a.holds);
  EXPECT_NEAR(a.failure_probability, 4.0 * std::exp(-1.0), 1e-15);
  EXPECT_NEAR(recovery_condition(0.05, 2.0, 2.0).failure_probability, 0.07326255555493671, 1e-15);
  EXPECT_FALSE(recovery_condition(1.0, 0.0, 0.1).holds);
  EXPECT_FALSE(recovery_condition(threshold, 2.0, 1.0).holds);
  EXPECT_THROW(recovery_condition(0.1, 1.0, 0.0), Error);
}

TEST(Report, GridChoice) {
  const WeakBoundReport r = weak_bound_report(0.05, {400, 1.0}, 2.0);
  ASSERT_TRUE(r.xi.has_value());
  // Brute-force the grid again and compare.
  double best = 10.0;
  for (int i = 1; i <= 99; ++i) {
    const double xi = i / 100.0;
    const double M = m_bound(0.05, xi, r.E_norm);
    if (M <= xi) best = std::min(best, tail_bound(0.05, xi, M));
  }
  EXPECT_EQ(r.tail_probability, best);
  EXPECT_EQ(r.tail_vacuous, best >= 1.0);
  EXPECT_GE(r.tail_probability, 0.0);
  EXPECT_LE(r.tail_probability, 4.0);
}

TEST(Report, NoFeasibleXi) {
  const WeakBoundReport r = weak_bound_report(0.9, {10, 10.0}, 1.0);
  EXPECT_FALSE(r.xi.has_value());
  EXPECT_EQ(r.tail_probability, 4.0);
  EXPECT_TRUE(r.tail_vacuous);
}

TEST(Wilson, KnownValues) {
  // 0 of 10: upper end z^2 / (n + z^2).
  const double z = 1.959963984540054;
  const WilsonInterval w = wilson_interval(0, 10);
  EXPECT_EQ(w.low, 0.0);
  EXPECT_NEAR(w.high, z * z / (10.0 + z * z), 1e-14);
  const WilsonInterval h = wilson_interval(50, 100);
  EXPECT_NEAR(h.low + h.high, 1.0, 1e-14);
  EXPECT_NEAR(h.halfwidth, z * std::sqrt(0.25 / 100.0 + z * z / 40000.0) / (1.0 + z * z / 100.0), 1e-14);
  EXPECT_THROW(wilson_interval(3, 2), Error);
}

TEST(MonteCarlo, ZeroModelAndDeterminism) {
  RngStream rng(4);
  const Matrix A = gaussian_matrix(10, 20, rng);
  const RngStream seed(99);
  EXPECT_EQ(monte_carlo_membership_rate(A, {20, 0.0}, 30, seed).failures, 0);
  const MembershipRate a = monte_carlo_membership_rate(A, {20, 3.0}, 40, seed, 1);
  const MembershipRate b = monte_carlo_membership_rate(A, {20, 3.0}, 40, seed, 3);
  EXPECT_EQ(a.failures, b.failures);
  const MembershipRate one = monte_carlo_membership_rate(A, {20, 3.0}, 1, seed);
  EXPECT_TRUE(one.rate == 0.0 || one.rate == 1.0);
  EXPECT_EQ(one.rate, monte_carlo_membership_rate(A, {20, 3.0}, 1, seed).rate);
}
