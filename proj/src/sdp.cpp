#include "l1cert/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "l1cert/error.hpp"
#include "l1cert/l1_projection.hpp"

namespace l1cert {

void SplitSdp::validate() const {
  const Index n = dim();
  require(n >= 1 && C.cols() == n, ErrorKind::DomainError, "objective must be a nonempty square matrix");
  require(psd || l1_radius.has_value() || diag_one, ErrorKind::DomainError,
          "at least one of psd / l1_radius / diag_one must be active");
  require(C.allFinite(), ErrorKind::NonFinite, "objective contains non-finite entries");
  require((C - C.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + C.cwiseAbs().maxCoeff()),
          ErrorKind::DomainError, "objective must be symmetric");
  if (l1_radius) require(*l1_radius > 0.0, ErrorKind::DomainError, "ell_1 radius must be positive");
  for (const auto& con : constraints) {
    require(con.A.rows() == n && con.A.cols() == n, ErrorKind::DomainError, "constraint matrix has wrong shape");
    require(con.A.allFinite() && std::isfinite(con.b), ErrorKind::NonFinite, "constraint contains non-finite data");
  }
}

namespace {

double frob_dot(const Matrix& a, const Matrix& b) { return (a.array() * b.array()).sum(); }

// Nullspace of a semidefinite constraint within the current face, or nothing
// when the constraint is not semidefinite.
std::optional<Matrix> reduce_face(const Matrix& F, const Matrix& A) {
  const Matrix S = symmetrize(A);
  const auto eig = symmetric_eigen(S);
  const double scale = eig.values.cwiseAbs().maxCoeff();
  if (scale == 0.0) return F;
  const bool psd = eig.values.minCoeff() >= -1e-12 * scale;
  const bool nsd = eig.values.maxCoeff() <= 1e-12 * scale;
  if (!psd && !nsd) return std::nullopt;
  if (F.cols() == 0) return F;
  const auto inner = symmetric_eigen(F.transpose() * S * F);
  std::vector<Index> keep;
  for (Index i = 0; i < inner.values.size(); ++i)
    if (std::abs(inner.values(i)) <= 1e-10 * scale) keep.push_back(i);
  Matrix reduced(F.rows(), static_cast<Index>(keep.size()));
  for (Index k = 0; k < reduced.cols(); ++k) reduced.col(k) = F * inner.vectors.col(keep[static_cast<std::size_t>(k)]);
  return reduced;
}

// Projection onto {X : <A_i, X> = b_i} using the pseudo-inverse of the Gram
// matrix; diag_one alone is handled by overwriting the diagonal.
class AffineSet {
 public:
  AffineSet(Index n, const std::vector<AffineConstraint>& cons, bool diag_one) : n_(n) {
    diag_only_ = cons.empty() && diag_one;
    if (diag_only_) return;
    const Index q = static_cast<Index>(cons.size()) + (diag_one ? n : 0);
    basis_ = Matrix::Zero(n * n, q);
    rhs_ = Vector::Zero(q);
    Index k = 0;
    for (const auto& con : cons) {
      const Matrix S = symmetrize(con.A);
      basis_.col(k) = Eigen::Map<const Vector>(S.data(), n * n);
      rhs_(k) = con.b;
      ++k;
    }
    if (diag_one) {
      for (Index i = 0; i < n; ++i, ++k) {
        basis_(i * n + i, k) = 1.0;
        rhs_(k) = 1.0;
      }
    }
    const Matrix gram = basis_.transpose() * basis_;
    gram_pinv_ = gram.completeOrthogonalDecomposition().pseudoInverse();
  }

  Matrix project(const Matrix& X) const {
    if (diag_only_) {
      Matrix out = X;
      out.diagonal().setOnes();
      return out;
    }
    const Vector vx = Eigen::Map<const Vector>(X.data(), n_ * n_);
    const Vector lambda = gram_pinv_ * (basis_.transpose() * vx - rhs_);
    Vector out = vx - basis_ * lambda;
    return Eigen::Map<const Matrix>(out.data(), n_, n_);
  }

  /// Component of Z in span{A_i} and its support value sum_i y_i b_i.
  std::pair<Matrix, double> dual_part(const Matrix& Z) const {
    if (diag_only_) {
      Matrix D = Matrix::Zero(n_, n_);
      D.diagonal() = Z.diagonal();
      return {D, Z.diagonal().sum()};
    }
    const Vector vz = Eigen::Map<const Vector>(Z.data(), n_ * n_);
    const Vector y = gram_pinv_ * (basis_.transpose() * vz);
    Vector part = basis_ * y;
    return {Eigen::Map<const Matrix>(part.data(), n_, n_), y.dot(rhs_)};
  }

  double max_violation(const Matrix& X) const {
    if (diag_only_) return (X.diagonal().array() - 1.0).abs().maxCoeff();
    const Vector vx = Eigen::Map<const Vector>(X.data(), n_ * n_);
    const Vector r = basis_.transpose() * vx - rhs_;
    return r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
  }

  bool diag_only() const { return diag_only_; }

 private:
  Index n_;
  bool diag_only_ = false;
  Matrix basis_;
  Vector rhs_;
  Matrix gram_pinv_;
};

enum class SetKind { Affine, L1 };

struct Certificate {
  Matrix rounded;
  double rounded_objective = 0.0;
  bool rounded_feasible = false;
  double dual_bound = 0.0;
};

struct LocalCopy {
  SetKind kind;
  Matrix W;
  Matrix U;
};

}  // namespace

SdpSolution solve_split_sdp(const SplitSdp& problem, const SdpOptions& options) {
  problem.validate();
  require(options.tol > 0.0 && options.max_iters >= 1 && options.rho > 0.0, ErrorKind::DomainError,
          "invalid SDP solver options");
  const Index n = problem.dim();
  const Matrix C = symmetrize(problem.C);

  Matrix F = Matrix::Identity(n, n);
  std::vector<AffineConstraint> remaining;
  for (const auto& con : problem.constraints) {
    if (problem.psd && options.facial_reduction && con.b == 0.0) {
      if (auto reduced = reduce_face(F, con.A)) {
        F = std::move(*reduced);
        continue;
      }
    }
    remaining.push_back(con);
  }
  const Index d = F.cols();

  std::optional<AffineSet> affine;
  if (!remaining.empty() || problem.diag_one) affine.emplace(n, remaining, problem.diag_one);
  const std::optional<double> radius = problem.l1_radius;

  SdpSolution sol;
  sol.reduced_dim = d;

  if (d == 0) {
    // The face is {0}.
    sol.primal = Matrix::Zero(n, n);
    sol.rounded = sol.primal;
    const double viol = affine ? affine->max_violation(sol.primal) : 0.0;
    sol.status = viol <= 1e-9 ? SolveStatus::Optimal : SolveStatus::Infeasible;
    sol.primal_residual = viol;
    sol.rounded_feasible = sol.status == SolveStatus::Optimal;
    return sol;
  }

  std::vector<LocalCopy> copies;
  if (affine) copies.push_back({SetKind::Affine, Matrix::Zero(n, n), Matrix::Zero(n, n)});
  if (radius) copies.push_back({SetKind::L1, Matrix::Zero(n, n), Matrix::Zero(n, n)});
  require(!copies.empty(), ErrorKind::DomainError,
          "problem is a bare PSD cone after facial reduction; objective unbounded or trivial");
  const double K = static_cast<double>(copies.size());

  const bool full_face = d == n;
  const Matrix C_red = full_face ? C : Matrix(F.transpose() * C * F);
  auto lift = [&](const Matrix& Y) -> Matrix {
    if (full_face) return Y;
    return symmetrize(F * Y * F.transpose());
  };
  auto reduce = [&](const Matrix& Q) -> Matrix {
    if (full_face) return Q;
    return F.transpose() * Q * F;
  };
  auto project_local = [&](SetKind kind, const Matrix& V) -> Matrix {
    if (kind == SetKind::Affine) return affine->project(V);
    return project_l1_ball_symmetric(V, *radius);
  };

  double rho = options.rho;
  // Rounded primal point and dual bound for the current iterate.
  auto certificate = [&](const Matrix& X) {
    Certificate out;
    Matrix Xr = X;
    if (radius) {
      const double scale = entrywise_l1(Xr) / *radius;
      if (scale > 1.0) Xr /= scale;
    }
    if (affine && affine->diag_only() && !radius) {
      const Vector diag = Xr.diagonal();
      if (diag.minCoeff() > 0.0) {
        const Vector inv_sqrt = diag.cwiseSqrt().cwiseInverse();
        Xr = inv_sqrt.asDiagonal() * Xr * inv_sqrt.asDiagonal();
        Xr.diagonal().setOnes();
      }
    }
    if (problem.psd) {
      Xr = project_psd(Xr);
      if (radius) {
        const double scale = entrywise_l1(Xr) / *radius;
        if (scale > 1.0) Xr /= scale;
      }
    }
    bool feasible = true;
    if (affine) {
      double tol_aff = 1e-9 * (1.0 + Xr.cwiseAbs().maxCoeff());
      if (affine->diag_only()) tol_aff = 1e-12;
      feasible = feasible && affine->max_violation(Xr) <= tol_aff;
    }
    if (radius) feasible = feasible && entrywise_l1(Xr) <= *radius * (1.0 + 1e-12);
    if (!full_face) {
      const Matrix off_face = Xr - F * (F.transpose() * Xr * F) * F.transpose();
      feasible = feasible && off_face.cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + Xr.cwiseAbs().maxCoeff());
    }
    out.rounded = Xr;
    out.rounded_objective = frob_dot(C, Xr);
    out.rounded_feasible = feasible;

    // Dual certificate from the scaled multipliers.
    double support = 0.0;
    Matrix Zsum = Matrix::Zero(n, n);
    for (const auto& cp : copies) {
      const Matrix Z = rho * cp.U;
      if (cp.kind == SetKind::L1) {
        support += *radius * Z.cwiseAbs().maxCoeff();
        Zsum += Z;
      } else {
        auto [part, value] = affine->dual_part(Z);
        support += value;
        Zsum += part;
      }
    }
    const Matrix slack = symmetrize(Zsum - C);
    double trace_bound = std::numeric_limits<double>::infinity();
    if (radius) trace_bound = *radius;
    if (problem.diag_one) trace_bound = std::min(trace_bound, static_cast<double>(n));
    double correction = 0.0;
    if (problem.psd) {
      const auto eig = symmetric_eigen(reduce(slack));
      const double mu = std::max(0.0, -eig.values.minCoeff());
      if (mu > 0.0) correction = mu * trace_bound;
    } else {
      const double dev = slack.cwiseAbs().maxCoeff();
      if (dev > 0.0) correction = dev * (radius ? *radius : std::numeric_limits<double>::infinity());
    }
    out.dual_bound = support + correction;
    return out;
  };

  const double alpha = options.relaxation;
  Matrix X = Matrix::Zero(n, n);
  Matrix Y = Matrix::Zero(d, d);
  double r_pri = 0.0;
  double r_dual = 0.0;
  bool converged = false;
  long iter = 0;
  constexpr long kAdaptEvery = 50;
  constexpr long kAdaptUntil = 20000;

  if (options.trace) *options.trace << "iteration,primal_residual,dual_residual,rho,objective\n";

  for (iter = 1; iter <= options.max_iters; ++iter) {
    Matrix Q = Matrix::Zero(n, n);
    for (const auto& cp : copies) Q += cp.W - cp.U;
    Q /= K;
    Matrix target = reduce(Q) + C_red / (K * rho);
    Y = problem.psd ? project_psd(target) : symmetrize(target);
    X = lift(Y);
    if (!X.allFinite()) fail(ErrorKind::NonFinite, "SDP iterate overflowed");

    double pri2 = 0.0;
    double dual2 = 0.0;
    double w2 = 0.0;
    double u2 = 0.0;
    for (auto& cp : copies) {
      const Matrix relaxed = alpha * X + (1.0 - alpha) * cp.W;
      Matrix W_new = project_local(cp.kind, relaxed + cp.U);
      cp.U += relaxed - W_new;
      dual2 += (W_new - cp.W).squaredNorm();
      cp.W = std::move(W_new);
      pri2 += (X - cp.W).squaredNorm();
      w2 += cp.W.squaredNorm();
      u2 += cp.U.squaredNorm();
    }
    r_pri = std::sqrt(pri2);
    r_dual = rho * std::sqrt(dual2);
    const double pri_scale = std::max({std::sqrt(K) * X.norm(), std::sqrt(w2), 1e-8});
    const double dual_scale = std::max(rho * std::sqrt(u2), 1e-8);

    if (options.trace && (iter % options.trace_every == 0 || iter == 1))
      *options.trace << iter << ',' << r_pri << ',' << r_dual << ',' << rho << ',' << frob_dot(C, X) << '\n';

    if (r_pri <= options.tol * pri_scale && r_dual <= options.tol * dual_scale) {
      converged = true;
      break;
    }
    if (iter % kAdaptEvery == 0) {
      // Certified gap between a feasible rounded point and the dual bound.
      const Certificate cert = certificate(X);
      if (cert.rounded_feasible &&
          cert.dual_bound - cert.rounded_objective <= options.tol * (1.0 + std::abs(cert.rounded_objective))) {
        converged = true;
        break;
      }
    }
    if (iter % kAdaptEvery == 0 && iter <= kAdaptUntil) {
      const double rp = r_pri / pri_scale;
      const double rd = r_dual / dual_scale;
      double factor = 1.0;
      if (rp > 10.0 * rd) factor = 2.0;
      else if (rd > 10.0 * rp) factor = 0.5;
      if (factor != 1.0) {
        rho *= factor;
        for (auto& cp : copies) cp.U /= factor;
      }
    }
  }
  sol.iterations = std::min(iter, options.max_iters);
  sol.status = converged ? SolveStatus::Optimal : SolveStatus::MaxIters;
  sol.primal = X;
  sol.objective = frob_dot(C, X);
  sol.primal_residual = r_pri;
  sol.dual_residual = r_dual;

  const Certificate cert = certificate(X);
  sol.rounded = cert.rounded;
  sol.rounded_objective = cert.rounded_objective;
  sol.rounded_feasible = cert.rounded_feasible;
  sol.dual_bound = cert.dual_bound;
  // A closed certified gap is worth more than the iterate, which may still
  // carry a sizeable primal residual when the gap test ended the loop.
  if (cert.rounded_feasible &&
      cert.dual_bound - cert.rounded_objective <= options.tol * (1.0 + std::abs(cert.rounded_objective)))
    sol.objective = cert.rounded_objective;
  return sol;
}

}  // namespace l1cert
