#include "l1cert/weak.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "l1cert/error.hpp"
#include "l1cert/parallel.hpp"

namespace l1cert {

void SignalModel::validate() const {
  require(n >= 1, ErrorKind::DomainError, "signal length must be at least 1");
  require(std::isfinite(k) && k >= 0.0 && k <= static_cast<double>(n), ErrorKind::DomainError,
          "expected cardinality must lie in [0, n]");
}

SparseSignal sample_signal(const SignalModel& model, RngStream& rng) {
  model.validate();
  const double p = model.k / (2.0 * static_cast<double>(model.n));
  Vector u = Vector::Zero(model.n);
  for (Index i = 0; i < model.n; ++i) {
    const double r = rng.uniform();
    if (r < p) u(i) = -1.0;
    else if (r < 2.0 * p) u(i) = 1.0;
  }
  return SparseSignal(std::move(u));
}

double expected_norm(const SignalModel& model) {
  model.validate();
  const double n = static_cast<double>(model.n);
  const double p = model.k / n;
  if (p == 0.0) return 0.0;
  if (p == 1.0) return std::sqrt(n);
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const double log_nf = std::lgamma(n + 1.0);
  double sum = 0.0;
  for (Index j = 1; j <= model.n; ++j) {
    const double jd = static_cast<double>(j);
    const double log_pmf = log_nf - std::lgamma(jd + 1.0) - std::lgamma(n - jd + 1.0) + jd * log_p + (n - jd) * log_q;
    sum += std::sqrt(jd) * std::exp(log_pmf);
  }
  return sum;
}

double m_bound(double S_A, double xi, double E_norm) {
  require(xi > 0.0 && xi < 1.0, ErrorKind::DomainError, "xi must lie in (0, 1)");
  require(S_A >= 0.0 && E_norm >= 0.0, ErrorKind::DomainError, "S_A and E_norm must be nonnegative");
  return (1.0 + xi) * S_A * E_norm;
}

double tail_bound(double S_A, double xi, double M_A) {
  require(xi > 0.0 && xi < 1.0, ErrorKind::DomainError, "xi must lie in (0, 1)");
  require(S_A >= 0.0, ErrorKind::DomainError, "S_A must be nonnegative");
  require(M_A <= xi, ErrorKind::DomainError, "tail bound needs M(A) <= xi");
  const double gap = xi - M_A;
  if (gap == 0.0) return 4.0;
  if (S_A == 0.0) return 0.0;
  const double scale = 1.0 + xi;
  const double value = 4.0 * std::exp(-(gap * gap) / (4.0 * scale * scale * S_A * S_A));
  return std::clamp(value, 0.0, 4.0);
}

RecoveryCondition recovery_condition(double S_A, double E_norm, double beta) {
  require(beta > 0.0, ErrorKind::DomainError, "beta must be positive");
  RecoveryCondition out;
  out.holds = S_A < 1.0 / (E_norm + 2.0 * beta + 4.0 * std::sqrt(std::numbers::pi));
  out.failure_probability = 4.0 * std::exp(-beta * beta);
  return out;
}

WeakBoundReport weak_bound_report(double S_A, const SignalModel& model, double beta) {
  WeakBoundReport r;
  r.S_A = S_A;
  r.beta = beta;
  r.E_norm = expected_norm(model);
  r.M_A_bound = m_bound(S_A, 0.99, r.E_norm);
  for (int i = 1; i <= 99; ++i) {
    const double xi = i / 100.0;
    const double M = m_bound(S_A, xi, r.E_norm);
    if (M > xi) continue;
    const double tail = tail_bound(S_A, xi, M);
    if (!r.xi || tail < r.tail_probability) {
      r.xi = xi;
      r.M_A_bound = M;
      r.tail_probability = tail;
    }
  }
  r.tail_vacuous = r.tail_probability >= 1.0;
  const RecoveryCondition cond = recovery_condition(S_A, r.E_norm, beta);
  r.condition_holds = cond.holds;
  r.failure_probability = cond.failure_probability;
  r.failure_vacuous = cond.failure_probability >= 1.0;
  return r;
}

WilsonInterval wilson_interval(long failures, long trials, double z) {
  require(trials >= 1 && failures >= 0 && failures <= trials, ErrorKind::DomainError,
          "need 0 <= failures <= trials and trials >= 1");
  const double t = static_cast<double>(trials);
  const double p = static_cast<double>(failures) / t;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / t;
  const double center = (p + z2 / (2.0 * t)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / t + z2 / (4.0 * t * t)) / denom;
  WilsonInterval w;
  w.low = std::max(0.0, center - half);
  w.high = std::min(1.0, center + half);
  if (failures == 0) w.low = 0.0;
  if (failures == trials) w.high = 1.0;
  w.halfwidth = half;
  return w;
}

MembershipRate monte_carlo_membership_rate(const Matrix& A, const SignalModel& model, long trials,
                                           const RngStream& rng, unsigned workers) {
  require(trials >= 1, ErrorKind::DomainError, "trials must be at least 1");
  require(model.n == A.cols(), ErrorKind::DomainError, "signal model length does not match the matrix");
  model.validate();
  std::vector<char> failed(static_cast<std::size_t>(trials), 0);
  parallel_for(failed.size(), workers, [&](std::size_t t) {
    RngStream local = rng.derive(t);
    const SparseSignal u = sample_signal(model, local);
    if (u.cardinality() == 0) return;
    failed[t] = decode_signal(A, u, false).signature_subset_of_u ? 0 : 1;
  });
  MembershipRate out;
  out.trials = trials;
  for (char f : failed) out.failures += f;
  out.rate = static_cast<double>(out.failures) / static_cast<double>(trials);
  out.interval = wilson_interval(out.failures, trials);
  return out;
}

}  // namespace l1cert
