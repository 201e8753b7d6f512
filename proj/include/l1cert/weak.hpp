#pragma once

#include <optional>

#include "l1cert/linalg.hpp"
#include "l1cert/recover.hpp"
#include "l1cert/rng.hpp"

namespace l1cert {

/// i.i.d. ternary entries: -1 and +1 each with probability k/2n, else 0.
struct SignalModel {
  Index n = 0;
  double k = 0.0;

  void validate() const;
};

SparseSignal sample_signal(const SignalModel& model, RngStream& rng);

/// E ||u||_2 by summing sqrt(j) against the Binomial(n, k/n) pmf in log space.
double expected_norm(const SignalModel& model);

/// (1 + xi) S_A E_norm.
double m_bound(double S_A, double xi, double E_norm);

/// 4 exp(-(xi - M_A)^2 / (4 (1 + xi)^2 S_A^2)), clamped to [0, 4]. Requires M_A <= xi.
double tail_bound(double S_A, double xi, double M_A);

struct RecoveryCondition {
  bool holds = false;
  double failure_probability = 0.0;  // 4 exp(-beta^2), reported as-is
};

/// S_A < 1 / (E_norm + 2 beta + 4 sqrt(pi)).
RecoveryCondition recovery_condition(double S_A, double E_norm, double beta);

struct WeakBoundReport {
  double S_A = 0.0;
  double E_norm = 0.0;
  std::optional<double> xi;  // grid minimizer; empty when no grid point has M <= xi
  double M_A_bound = 0.0;
  double tail_probability = 4.0;
  bool tail_vacuous = true;
  bool condition_holds = false;
  double failure_probability = 0.0;
  bool failure_vacuous = true;
  double beta = 0.0;
};

/// Picks xi on {0.01, ..., 0.99} minimizing the tail bound subject to M <= xi.
WeakBoundReport weak_bound_report(double S_A, const SignalModel& model, double beta);

struct WilsonInterval {
  double low = 0.0;
  double high = 0.0;
  double halfwidth = 0.0;
};

/// 95% Wilson score interval.
WilsonInterval wilson_interval(long failures, long trials, double z = 1.959963984540054);

struct MembershipRate {
  long trials = 0;
  long failures = 0;
  double rate = 0.0;
  WilsonInterval interval;
};

/// Samples signals with per-trial streams rng.derive(trial), decodes with
/// ell_1 and counts signature mismatches. Order independent for any worker count.
MembershipRate monte_carlo_membership_rate(const Matrix& A, const SignalModel& model, long trials,
                                           const RngStream& rng, unsigned workers = 1);

}  // namespace l1cert
