#include "l1cert/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "l1cert/error.hpp"
#include "l1cert/lp.hpp"
#include "l1cert/parallel.hpp"

namespace l1cert {

namespace {

Estimate summarize(const std::vector<double>& xs) {
  const double count = static_cast<double>(xs.size());
  Estimate e;
  e.mean = pairwise_sum(xs.data(), xs.size()) / count;
  std::vector<double> dev(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) dev[i] = (xs[i] - e.mean) * (xs[i] - e.mean);
  const double var = pairwise_sum(dev.data(), dev.size()) / (count - 1.0);
  e.std_error = std::sqrt(var / count);
  return e;
}

Vector gaussian_vector(Index d, RngStream& rng) {
  Vector g(d);
  for (Index i = 0; i < d; ++i) g(i) = rng.normal();
  return g;
}

void require_basis(const Matrix& F) {
  require(F.rows() >= 1 && F.cols() >= 1, ErrorKind::DomainError, "basis must be nonempty");
  require_finite(F, "basis");
}

}  // namespace

double lambda_n(Index n) {
  require(n >= 1, ErrorKind::DomainError, "lambda_n needs n >= 1");
  const double x = static_cast<double>(n);
  return std::sqrt(2.0) * std::exp(std::lgamma((x + 1.0) / 2.0) - std::lgamma(x / 2.0));
}

double m_l1_closed_form(const Matrix& F) {
  require_basis(F);
  double sum = 0.0;
  for (Index i = 0; i < F.rows(); ++i) sum += F.row(i).norm();
  return std::sqrt(2.0 / std::numbers::pi) * sum / lambda_n(F.cols());
}

Estimate m_k_monte_carlo(const Matrix& F, long samples, const RngStream& rng, unsigned workers) {
  require_basis(F);
  require(samples >= 2, ErrorKind::DomainError, "need at least two samples");
  std::vector<double> values(static_cast<std::size_t>(samples));
  parallel_for(values.size(), workers, [&](std::size_t s) {
    RngStream local = rng.derive(s);
    Vector y = gaussian_vector(F.cols(), local);
    y /= y.norm();
    values[s] = (F * y).lpNorm<1>();
  });
  return summarize(values);
}

MaxcutBounds b_maxcut(const Matrix& F, const SdpOptions& options) {
  require_basis(F);
  require(F.rows() <= 128, ErrorKind::TooLarge, "MAXCUT bound supports n <= 128");
  SplitSdp problem;
  problem.C = symmetrize(F * F.transpose());
  problem.diag_one = true;
  MaxcutBounds out;
  out.solution = solve_split_sdp(problem, options);
  out.sdp_value = out.solution.objective;
  out.sdp_lower = out.solution.rounded_feasible ? std::max(0.0, out.solution.rounded_objective) : 0.0;
  out.sdp_upper = out.solution.dual_bound;
  out.lower = std::sqrt(2.0 / std::numbers::pi * out.sdp_lower);
  out.upper = std::sqrt(std::max(0.0, out.sdp_upper));
  return out;
}

double b_exact_bruteforce(const Matrix& F) {
  require_basis(F);
  const Index n = F.rows();
  require(n <= 14, ErrorKind::TooLarge, "sign enumeration supports n <= 14");
  // u and -u give the same value, so fix u_0 = +1.
  double best = 0.0;
  Vector u(n);
  for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
    u(0) = 1.0;
    for (Index i = 1; i < n; ++i) u(i) = (mask >> (i - 1)) & 1u ? -1.0 : 1.0;
    best = std::max(best, (F.transpose() * u).norm());
  }
  return best;
}

double dvoretzky_dimension(double M_K, double b_K, Index n_ambient, double c) {
  require(b_K > 0.0, ErrorKind::DomainError, "b(K) must be positive");
  require(c > 0.0 && n_ambient >= 1, ErrorKind::DomainError, "need c > 0 and n >= 1");
  const double ratio = M_K / b_K;
  return c * static_cast<double>(n_ambient) * ratio * ratio;
}

Estimate mstar_estimate(const Matrix& F, long samples, const RngStream& rng, double tol, unsigned workers) {
  require_basis(F);
  require(samples >= 2, ErrorKind::DomainError, "need at least two samples");
  const Index n = F.rows();
  const Index d = F.cols();

  // Variables (x, t): min t s.t. -t <= (F g + x)_i <= t, F'x = 0.
  LinearProgram base;
  base.c = Vector::Zero(n + 1);
  base.c(n) = 1.0;
  base.E = Matrix::Zero(d, n + 1);
  base.E.leftCols(n) = F.transpose();
  base.f = Vector::Zero(d);
  base.G = Matrix::Zero(2 * n, n + 1);
  base.G.topLeftCorner(n, n) = Matrix::Identity(n, n);
  base.G.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
  base.G.col(n).setConstant(-1.0);
  base.bounds.assign(static_cast<std::size_t>(n + 1), VarBound::Free);

  std::vector<double> values(static_cast<std::size_t>(samples));
  parallel_for(values.size(), workers, [&](std::size_t s) {
    RngStream local = rng.derive(s);
    const Vector v = F * gaussian_vector(d, local);
    LinearProgram lp = base;
    lp.h.resize(2 * n);
    lp.h << -v, v;
    const LpSolution sol = solve_lp(lp, LpOptions{tol, LpOptions{}.max_iters});
    if (!sol.optimal())
      fail(sol.status == SolveStatus::MaxIters ? ErrorKind::MaxIters : ErrorKind::SolverFailure,
           "dual-norm LP ended with status " + std::string(to_string(sol.status)));
    values[s] = sol.objective;
  });
  Estimate e = summarize(values);
  const double lam = lambda_n(d);
  e.mean /= lam;
  e.std_error /= lam;
  return e;
}

long required_samples(double delta, double beta, double c) {
  require(delta > 0.0 && delta < 1.0 && beta > 0.0 && beta < 1.0, ErrorKind::DomainError,
          "delta and beta must lie in (0, 1)");
  require(c > 0.0, ErrorKind::DomainError, "c must be positive");
  return static_cast<long>(std::ceil(c * std::log(2.0 / beta) / (delta * delta) + 1.0));
}

double low_mstar_diameter(Index n_ambient, Index codim_k, double M_star, double c) {
  require(codim_k >= 1 && codim_k <= n_ambient, ErrorKind::DomainError, "codimension must lie in [1, n]");
  require(c > 0.0 && M_star >= 0.0, ErrorKind::DomainError, "need c > 0 and M* >= 0");
  return c * std::sqrt(static_cast<double>(n_ambient) / static_cast<double>(codim_k)) * M_star;
}

LowMBound low_m_diameter(double M_normalized, double lambda, double c1) {
  require(lambda >= 0.0 && lambda < 1.0, ErrorKind::DomainError, "lambda must lie in [0, 1)");
  require(c1 > 0.0, ErrorKind::DomainError, "c1 must be positive");
  const double gap = M_normalized - std::sqrt(lambda);
  require(gap > 1e-9, ErrorKind::DomainError, "low-M bound needs M(K) > sqrt(lambda)");
  LowMBound out;
  out.diameter = c1 * std::sqrt(1.0 - lambda) / gap;
  const double M2 = M_normalized * M_normalized;
  if (M2 < 1.0) out.delta = (M2 - lambda) / (1.0 - M2);
  return out;
}

double s_from_diameter(double diameter) {
  require(diameter > 0.0 && std::isfinite(diameter), ErrorKind::DomainError, "diameter must be positive");
  return 1.0 / (diameter * diameter);
}

GeometryReport geometry_report(const SensingMatrix& A, const RngStream& rng, const GeometryOptions& options) {
  require(!A.trivial_nullspace(), ErrorKind::DomainError, "geometry needs a nontrivial nullspace");
  const Matrix& F = A.nullspace();
  const GeometryConstants& k = options.constants;
  require(k.c > 0.0 && k.c1 > 0.0 && k.c2 > 0.0 && k.c3 > 0.0, ErrorKind::DomainError,
          "constants must be positive");

  GeometryReport r;
  r.n = A.cols();
  r.d = F.cols();
  r.codim = options.codim.value_or((r.d + 1) / 2);
  require(r.codim >= 1 && r.codim <= r.d, ErrorKind::DomainError, "codimension must lie in [1, d]");
  r.constants_used = k;

  r.M_K = m_l1_closed_form(F);
  r.M_K_mc = m_k_monte_carlo(F, options.samples, rng.derive(0), options.workers);

  const MaxcutBounds b = b_maxcut(F, options.sdp);
  r.b_K_sdp = b.upper;
  r.b_K_lower = b.lower;
  r.sdp_status = b.solution.status;
  r.sdp_iterations = b.solution.iterations;
  r.dvoretzky_k = dvoretzky_dimension(r.M_K, r.b_K_sdp, r.d, k.c);

  const long mstar_samples = options.mstar_samples > 0 ? options.mstar_samples : options.samples;
  r.M_star = mstar_estimate(F, mstar_samples, rng.derive(1), options.lp_tol, options.workers);
  r.diameter_bound = low_mstar_diameter(r.d, r.codim, r.M_star.mean, k.c);
  if (r.diameter_bound > 0.0) r.S_from_diameter = s_from_diameter(r.diameter_bound);

  r.M_normalized = r.M_K / r.b_K_sdp;
  r.lambda = static_cast<double>(r.codim) / static_cast<double>(r.d);
  if (r.lambda < 1.0 && r.M_normalized - std::sqrt(r.lambda) > 1e-9)
    r.low_m = low_m_diameter(r.M_normalized, r.lambda, k.c1);
  return r;
}

}  // namespace l1cert
