#include "l1cert/recover.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "l1cert/error.hpp"
#include "l1cert/lp.hpp"

namespace l1cert {

SparseSignal::SparseSignal(Vector values) : values_(std::move(values)) {
  require(values_.allFinite(), ErrorKind::NonFinite, "signal contains non-finite entries");
  const double inf = values_.size() ? values_.cwiseAbs().maxCoeff() : 0.0;
  const double zero_tol = 1e-9 * std::max(1.0, inf);
  for (Index i = 0; i < values_.size(); ++i)
    if (std::abs(values_(i)) > zero_tol) support_.push_back(i);
}

Vector SparseSignal::signature() const {
  Vector s = Vector::Zero(values_.size());
  for (Index i : support_) s(i) = values_(i) > 0.0 ? 1.0 : -1.0;
  return s;
}

bool SparseSignal::is_ternary() const {
  return std::all_of(values_.data(), values_.data() + values_.size(),
                     [](double v) { return v == 0.0 || v == 1.0 || v == -1.0; });
}

namespace {

DecodeResult decode(const Matrix& A, const Vector& b, bool box, double tol) {
  require_finite(A, "sensing matrix");
  require(b.size() == A.rows(), ErrorKind::DomainError, "measurement length does not match the matrix");
  require(b.allFinite(), ErrorKind::NonFinite, "measurements contain non-finite entries");
  const Index n = A.cols();

  const Vector ls = A.completeOrthogonalDecomposition().solve(b);
  const double residual = (A * ls - b).norm();
  require(residual <= 1e-8 * b.norm(), ErrorKind::Infeasible, "measurements are not in the range of A");

  LinearProgram lp;
  lp.c = Vector::Ones(2 * n);
  lp.E.resize(A.rows(), 2 * n);
  lp.E << A, -A;
  lp.f = b;
  lp.bounds.assign(static_cast<std::size_t>(2 * n), VarBound::NonNegative);
  if (box) {
    // At an optimum p_i q_i = 0, so p, q <= 1 is exactly |x_i| <= 1.
    lp.G = Matrix::Identity(2 * n, 2 * n);
    lp.h = Vector::Ones(2 * n);
  } else {
    lp.G.resize(0, 2 * n);
    lp.h.resize(0);
  }
  const LpSolution sol = solve_lp(lp, LpOptions{tol, LpOptions{}.max_iters});
  if (sol.status == SolveStatus::Infeasible) fail(ErrorKind::Infeasible, "no solution of Ax = b inside the box");
  if (!sol.optimal())
    fail(sol.status == SolveStatus::MaxIters ? ErrorKind::MaxIters : ErrorKind::SolverFailure,
         "decoding LP ended with status " + std::string(to_string(sol.status)));

  DecodeResult out;
  out.x = sol.x.head(n) - sol.x.tail(n);
  out.objective = out.x.lpNorm<1>();
  out.iterations = sol.iterations;
  return out;
}

}  // namespace

DecodeResult decode_l1(const Matrix& A, const Vector& b, double tol) { return decode(A, b, false, tol); }

DecodeResult decode_l1_box(const Matrix& A, const Vector& b, double tol) { return decode(A, b, true, tol); }

DecodeResult decode_signal(const Matrix& A, const SparseSignal& u, bool box, double tol) {
  require(u.size() == A.cols(), ErrorKind::DomainError, "signal length does not match the matrix");
  DecodeResult out = decode(A, A * u.values(), box, tol);
  out.signature_subset_of_u = check_signature(out.x, u);
  out.exact_match = (out.x - u.values()).cwiseAbs().maxCoeff() <= 1e-6;
  return out;
}

bool check_signature(const Vector& z, const SparseSignal& u) {
  require(z.size() == u.size(), ErrorKind::DomainError, "signature check needs equal lengths");
  for (Index i = 0; i < z.size(); ++i)
    if (u.values()(i) * z(i) < std::abs(z(i)) - 1e-9) return false;
  return true;
}

bool membership_u_sufficient(const SparseSignal& u, double s_upper, MembershipMode mode) {
  require(u.is_ternary(), ErrorKind::DomainError, "membership test needs a signal in {-1, 0, 1}^n");
  require(s_upper >= 0.0 && std::isfinite(s_upper), ErrorKind::DomainError, "s_upper must be finite and >= 0");
  if (u.cardinality() == 0) return true;
  const double limit = mode == MembershipMode::Literal ? 1.0 : 0.5;
  return s_upper * u.values().norm() < limit;
}

double best_k_term_error(const Vector& u, Index s) {
  require(s >= 0 && s <= u.size(), ErrorKind::DomainError, "term count must lie in [0, n]");
  std::vector<Index> order(static_cast<std::size_t>(u.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return std::abs(u(a)) > std::abs(u(b)); });
  double err = 0.0;
  for (std::size_t k = static_cast<std::size_t>(s); k < order.size(); ++k) err += std::abs(u(order[k]));
  return err;
}

ErrorBoundCheck verify_error_bound(const Matrix& A, const Vector& u, double S, double tol) {
  require(S >= 0.0 && std::isfinite(S), ErrorKind::DomainError, "S must be finite and >= 0");
  const SparseSignal signal(u);
  const DecodeResult dec = decode_signal(A, signal, false, tol);
  ErrorBoundCheck out;
  out.error_l1 = (u - dec.x).lpNorm<1>();
  const Index s = std::min<Index>(u.size(), static_cast<Index>(std::floor(S / 16.0)));
  out.bound = 4.0 * best_k_term_error(u, s);
  out.exactness_required = static_cast<double>(signal.cardinality()) <= S / 4.0;
  out.exact = dec.exact_match;
  out.holds = (!out.exactness_required || out.exact) && out.error_l1 <= out.bound + 1e-6;
  return out;
}

}  // namespace l1cert
