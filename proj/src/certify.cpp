#include "l1cert/certify.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <vector>

#include "l1cert/error.hpp"
#include "l1cert/parallel.hpp"

namespace l1cert {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void require_solved(const ConicSolution& sol, const char* what) {
  if (sol.optimal()) return;
  const ErrorKind kind = sol.status == SolveStatus::Infeasible ? ErrorKind::Infeasible
                         : sol.status == SolveStatus::MaxIters ? ErrorKind::MaxIters
                                                               : ErrorKind::SolverFailure;
  fail(kind, std::string(what) + ": LP ended with status " + std::string(to_string(sol.status)));
}

}  // namespace

Alpha1Result alpha1(const SensingMatrix& A, double tol, unsigned workers) {
  Alpha1Result out;
  if (A.trivial_nullspace()) return out;
  const Index m = A.rows();
  const Index n = A.cols();

  // x = p - q with p, q >= 0; A(p - q) = 0; sum(p + q) <= 1.
  LinearProgram lp;
  lp.E.resize(m, 2 * n);
  lp.E << A.matrix(), -A.matrix();
  lp.f = Vector::Zero(m);
  lp.G = Matrix::Ones(1, 2 * n);
  lp.h = Vector::Ones(1);
  lp.bounds.assign(static_cast<std::size_t>(2 * n), VarBound::NonNegative);
  const LpOptions opts{tol, LpOptions{}.max_iters};

  const std::size_t count = static_cast<std::size_t>(2 * n);
  std::vector<double> values(count, 0.0);
  std::vector<long> pivots(count, 0);
  parallel_for(count, workers, [&](std::size_t job) {
    const Index i = static_cast<Index>(job / 2);
    const double sign = job % 2 == 0 ? 1.0 : -1.0;
    LinearProgram local = lp;
    local.c = Vector::Zero(2 * n);
    local.c(i) = -sign;
    local.c(n + i) = sign;
    const LpSolution sol = solve_lp(local, opts);
    require_solved(sol, "alpha1");
    values[job] = 0.0 - sol.objective;
    pivots[job] = sol.iterations;
  });
  out.value = *std::max_element(values.begin(), values.end());
  out.lp_solves = static_cast<long>(count);
  for (long p : pivots) out.total_pivots += p;
  return out;
}

SdpBoundResult sdp_bound(const SensingMatrix& A, const SdpOptions& options) {
  const Index n = A.cols();
  SplitSdp problem;
  problem.C = Matrix::Identity(n, n);
  problem.constraints.push_back({A.matrix().transpose() * A.matrix(), 0.0});
  problem.l1_radius = 1.0;
  SdpBoundResult out;
  out.solution = solve_split_sdp(problem, options);
  out.value = out.solution.objective;
  out.lower = out.solution.rounded_feasible ? std::max(0.0, out.solution.rounded_objective) : 0.0;
  out.upper = out.solution.dual_bound;
  if (out.solution.reduced_dim == 0) out.value = out.lower = out.upper = 0.0;
  return out;
}

LpBoundResult lp_bound(const SensingMatrix& A, double tol) {
  const Index m = A.rows();
  const Index n = A.cols();
  require(n <= 64, ErrorKind::TooLarge, "lp_bound supports n <= 64");
  const Index nn = n * n;

  // X = P - Q stored column-major, entry (i, j) at i + j n.
  LinearProgram lp;
  lp.c = Vector::Zero(2 * nn);
  for (Index i = 0; i < n; ++i) {
    lp.c(i + i * n) = -1.0;
    lp.c(nn + i + i * n) = 1.0;
  }
  lp.E = Matrix::Zero(m * n, 2 * nn);
  for (Index j = 0; j < n; ++j)
    for (Index r = 0; r < m; ++r)
      for (Index i = 0; i < n; ++i) {
        lp.E(r + j * m, i + j * n) = A.matrix()(r, i);
        lp.E(r + j * m, nn + i + j * n) = -A.matrix()(r, i);
      }
  lp.f = Vector::Zero(m * n);
  lp.G = Matrix::Ones(1, 2 * nn);
  lp.h = Vector::Ones(1);
  lp.bounds.assign(static_cast<std::size_t>(2 * nn), VarBound::NonNegative);

  LpBoundResult out;
  out.solution = solve_lp(lp, LpOptions{tol, LpOptions{}.max_iters});
  require_solved(out.solution, "lp_bound");
  out.value = 0.0 - out.solution.objective;
  return out;
}

double s_exact_bruteforce(const SensingMatrix& A) {
  const Index m = A.rows();
  const Index n = A.cols();
  require(n <= 14 && m <= 7, ErrorKind::TooLarge, "brute-force S(A) needs n <= 14 and m <= 7");
  if (A.trivial_nullspace()) return 0.0;
  const int max_support = static_cast<int>(std::min(n, m + 1));
  double best = 0.0;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    const int size = std::popcount(mask);
    if (size > max_support) continue;
    Matrix sub(m, size);
    for (Index i = 0, k = 0; i < n; ++i)
      if (mask & (1u << i)) sub.col(k++) = A.matrix().col(i);
    const Matrix N = nullspace_of(sub);
    if (N.cols() != 1) continue;
    const double l1 = N.col(0).lpNorm<1>();
    best = std::max(best, N.col(0).norm() / l1);
  }
  return best;
}

long certified_cardinality(double s_upper) {
  require(s_upper > 0.0 && std::isfinite(s_upper), ErrorKind::DomainError, "s_upper must be positive");
  const double inv = 1.0 / s_upper;
  return static_cast<long>(std::floor(inv * inv / 4.0));
}

double rip_ratio_bound(double delta, long k_star) {
  require(delta >= 0.0 && delta < 1.0, ErrorKind::DomainError, "RIP constant must lie in [0, 1)");
  require(k_star >= 1, ErrorKind::DomainError, "k_star must be at least 1");
  return 2.0 / ((1.0 - delta) * std::sqrt(static_cast<double>(k_star)));
}

CertificateReport certify(const SensingMatrix& A, const CertifyOptions& options) {
  CertificateReport r;
  r.trivial_nullspace = A.trivial_nullspace();
  const unsigned workers = options.workers == 0 ? default_workers() : options.workers;

  auto t0 = std::chrono::steady_clock::now();
  const Alpha1Result a1 = alpha1(A, options.lp_tol, workers);
  r.alpha1 = a1.value;
  r.alpha1_lp_solves = a1.lp_solves;
  r.alpha1_pivots = a1.total_pivots;
  r.seconds_alpha1 = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const SdpBoundResult sdp = sdp_bound(A, options.sdp);
  r.sdp_value = sdp.value;
  r.sdp_lower = sdp.lower;
  r.sdp_upper = sdp.upper;
  r.sdp_status = sdp.solution.status;
  r.sdp_iterations = sdp.solution.iterations;
  r.sdp_primal_residual = sdp.solution.primal_residual;
  r.sdp_dual_residual = sdp.solution.dual_residual;
  r.sdp_reduced_dim = sdp.solution.reduced_dim;
  r.seconds_sdp = seconds_since(t0);

  if (options.with_lp_bound && A.cols() <= 64) {
    t0 = std::chrono::steady_clock::now();
    const LpBoundResult lp = lp_bound(A, options.lp_tol);
    r.lp_value = lp.value;
    r.lp_status = lp.solution.status;
    r.lp_iterations = lp.solution.iterations;
    r.seconds_lp = seconds_since(t0);
  }

  if (options.exact) r.s_exact = s_exact_bruteforce(A);

  r.s_lower = r.alpha1;
  // Only certified upper bounds on SDP(A) enter here: the dual bound and alpha1.
  r.s_upper = std::sqrt(std::max(0.0, std::min(r.sdp_upper, r.alpha1)));
  if (!r.trivial_nullspace && r.s_upper > 0.0) {
    r.recovery_S = 1.0 / (r.s_upper * r.s_upper);
    r.certified_cardinality = certified_cardinality(r.s_upper);
  }
  return r;
}

bool sandwich_check(const CertificateReport& report, double tol) {
  const double root_sdp = std::sqrt(std::max(0.0, report.sdp_value));
  bool ok = report.alpha1 <= root_sdp + tol && root_sdp <= std::sqrt(std::max(0.0, report.alpha1)) + tol;
  if (report.s_exact) ok = ok && report.alpha1 - tol <= *report.s_exact && *report.s_exact <= root_sdp + tol;
  return ok;
}

}  // namespace l1cert
