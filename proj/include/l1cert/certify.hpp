#pragma once

#include <optional>
#include <string>

#include "l1cert/linalg.hpp"
#include "l1cert/lp.hpp"
#include "l1cert/sdp.hpp"

namespace l1cert {

// Bounds on S(A) = max { ||x||_2 / ||x||_1 : Ax = 0 }, the radius of the
// section of the ell_1 ball by the nullspace of A.

struct Alpha1Result {
  double value = 0.0;
  long lp_solves = 0;
  long total_pivots = 0;
};

/// max ||x||_inf / ||x||_1 over the nullspace: 2n LPs max +-x_i over
/// {Ax = 0, ||x||_1 <= 1}. Zero for a trivial nullspace.
Alpha1Result alpha1(const SensingMatrix& A, double tol = 1e-8, unsigned workers = 1);

struct SdpBoundResult {
  double value = 0.0;   // unrounded ADMM objective
  double lower = 0.0;   // objective at the rounded feasible point
  double upper = 0.0;   // dual certificate; never below the true optimum
  SdpSolution solution;
};

/// max Tr X  s.t.  Tr(A'A X) = 0, sum|X_ij| <= 1, X PSD.  S(A)^2 <= value.
SdpBoundResult sdp_bound(const SensingMatrix& A, const SdpOptions& options = {});

struct LpBoundResult {
  double value = 0.0;
  LpSolution solution;
};

/// max Tr X  s.t.  AX = 0, sum|X_ij| <= 1. Dense LP with 2n^2 variables; n <= 64.
LpBoundResult lp_bound(const SensingMatrix& A, double tol = 1e-8);

/// Exact S(A) by enumerating every support T with |T| <= m + 1 whose column
/// submatrix has a one-dimensional nullspace. n <= 14, m <= 7.
double s_exact_bruteforce(const SensingMatrix& A);

/// floor((1 / s_upper^2) / 4).
long certified_cardinality(double s_upper);

/// 2 / ((1 - delta) sqrt(k_star)): bound on S(A) under RIP of order 3 k_star.
double rip_ratio_bound(double delta, long k_star);

struct CertifyOptions {
  double lp_tol = 1e-8;
  SdpOptions sdp{};
  bool exact = false;
  bool with_lp_bound = true;
  /// Threads for the alpha1 LPs; 0 picks default_workers().
  unsigned workers = 0;
};

struct CertificateReport {
  double alpha1 = 0.0;
  double sdp_value = 0.0;
  double sdp_lower = 0.0;
  double sdp_upper = 0.0;
  std::optional<double> lp_value;
  double s_lower = 0.0;
  double s_upper = 0.0;
  std::optional<double> s_exact;
  /// 1 / s_upper^2; absent for a trivial nullspace.
  std::optional<double> recovery_S;
  long certified_cardinality = 0;
  bool trivial_nullspace = false;

  // diagnostics
  long alpha1_lp_solves = 0;
  long alpha1_pivots = 0;
  SolveStatus sdp_status = SolveStatus::Optimal;
  long sdp_iterations = 0;
  double sdp_primal_residual = 0.0;
  double sdp_dual_residual = 0.0;
  Index sdp_reduced_dim = 0;
  std::optional<SolveStatus> lp_status;
  long lp_iterations = 0;
  double seconds_alpha1 = 0.0;
  double seconds_sdp = 0.0;
  double seconds_lp = 0.0;
};

CertificateReport certify(const SensingMatrix& A, const CertifyOptions& options = {});

/// alpha1 <= sqrt(sdp) + tol, sqrt(sdp) <= sqrt(alpha1) + tol, and when
/// present alpha1 - tol <= s_exact <= sqrt(sdp) + tol.
bool sandwich_check(const CertificateReport& report, double tol);

}  // namespace l1cert
