#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "l1cert/conic.hpp"

namespace l1cert {

struct AffineConstraint {
  Matrix A;  // symmetric
  double b = 0.0;
};

/// maximize Tr(C X) subject to Tr(A_i X) = b_i, optionally sum|X_ij| <= r,
/// X PSD, diag(X) = 1.
struct SplitSdp {
  Matrix C;
  std::vector<AffineConstraint> constraints;
  std::optional<double> l1_radius;
  bool psd = true;
  bool diag_one = false;

  Index dim() const { return C.rows(); }
  void validate() const;
};

struct SdpOptions {
  double tol = 1e-6;
  long max_iters = 100000;
  double rho = 1.0;
  double relaxation = 1.6;
  /// Replace zero-valued constraints with semidefinite A_i by restricting X
  /// to the nullspace of A_i.
  bool facial_reduction = true;
  /// Optional CSV diagnostics: iteration,primal_residual,dual_residual,rho,objective.
  std::ostream* trace = nullptr;
  long trace_every = 100;
};

struct SdpSolution : ConicSolution {
  /// Objective of the feasibility-rounded point (ell_1 scaling, diagonal
  /// normalization); a lower bound on the optimum when `rounded_feasible`.
  double rounded_objective = 0.0;
  bool rounded_feasible = false;
  Matrix rounded;
  /// Upper bound on the optimum from the ADMM multipliers, made valid for any
  /// multiplier by charging the PSD violation against a bound on Tr X.
  /// +inf when no trace bound is available.
  double dual_bound = 0.0;
  /// Dimension of the PSD block after facial reduction.
  Index reduced_dim = 0;
};

/// Scaled consensus ADMM: the PSD block (after optional facial reduction) is
/// the global variable; the affine/diag set and the ell_1 ball are local
/// copies. Adaptive penalty by residual balancing. Throws NonFinite on overflow.
SdpSolution solve_split_sdp(const SplitSdp& problem, const SdpOptions& options = {});

}  // namespace l1cert
