#pragma once

#include <optional>
#include <utility>

#include "l1cert/linalg.hpp"
#include "l1cert/rng.hpp"
#include "l1cert/sdp.hpp"

namespace l1cert {

// Estimators for the normed space (R^d, ||F y||_1), d = n - m, whose unit
// ball K is the nullspace section of the ell_1 ball seen through F.

/// E ||g||_2 for g ~ N(0, I_n): sqrt(2) Gamma((n+1)/2) / Gamma(n/2).
double lambda_n(Index n);

/// Spherical mean M(K) = sqrt(2/pi) sum_i ||F_i||_2 / lambda_d over rows F_i.
double m_l1_closed_form(const Matrix& F);

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Average of ||F y||_1 over uniform points y on the sphere of R^d.
Estimate m_k_monte_carlo(const Matrix& F, long samples, const RngStream& rng, unsigned workers = 1);

struct MaxcutBounds {
  double lower = 0.0;  // sqrt(2/pi * SDP_lower)
  double upper = 0.0;  // sqrt(SDP_upper)
  double sdp_value = 0.0;
  double sdp_lower = 0.0;
  double sdp_upper = 0.0;
  SdpSolution solution;
};

/// Bounds on b(K) = max_{||x||_2 <= 1} ||F x||_1 from
/// max Tr(X F F') s.t. diag X = 1, X PSD.
MaxcutBounds b_maxcut(const Matrix& F, const SdpOptions& options = {});

/// max over sign vectors u of ||F' u||_2. n <= 14 rows.
double b_exact_bruteforce(const Matrix& F);

/// c n (M / b)^2.
double dvoretzky_dimension(double M_K, double b_K, Index n_ambient, double c = 1.0);

/// Dual-norm mean M(K*): per sample g ~ N(0, I_d) solve
/// min ||F g + x||_inf s.t. F'x = 0, then divide the average by lambda_d.
Estimate mstar_estimate(const Matrix& F, long samples, const RngStream& rng, double tol = 1e-8,
                        unsigned workers = 1);

/// ceil(c log(2/beta) / delta^2 + 1).
long required_samples(double delta, double beta, double c = 1.0);

/// c sqrt(n / k) M*.
double low_mstar_diameter(Index n_ambient, Index codim_k, double M_star, double c = 1.0);

struct LowMBound {
  double diameter = 0.0;
  /// Empty when M >= 1.
  std::optional<double> delta;
};

/// c1 sqrt(1 - lambda) / (M - sqrt(lambda)) and (M^2 - lambda) / (1 - M^2)
/// for a body normalized so that B_2 is inside K.
LowMBound low_m_diameter(double M_normalized, double lambda, double c1 = 1.0);

/// 1 / diam^2.
double s_from_diameter(double diameter);

struct GeometryConstants {
  double c = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
  double c3 = 1.0;
};

struct GeometryOptions {
  long samples = 1000;
  long mstar_samples = 0;  // 0 means `samples`
  std::optional<Index> codim;  // default ceil(d / 2)
  GeometryConstants constants{};
  SdpOptions sdp{};
  double lp_tol = 1e-8;
  unsigned workers = 1;
};

struct GeometryReport {
  Index n = 0;
  Index d = 0;
  Index codim = 0;
  double M_K = 0.0;
  Estimate M_K_mc;
  double b_K_sdp = 0.0;
  double b_K_lower = 0.0;
  double dvoretzky_k = 0.0;
  Estimate M_star;
  double diameter_bound = 0.0;
  double S_from_diameter = 0.0;
  /// Low-M bound for the body rescaled by 1 / b_K_sdp, with lambda = codim / d.
  /// Empty when M_K / b_K_sdp <= sqrt(lambda).
  std::optional<LowMBound> low_m;
  double M_normalized = 0.0;
  double lambda = 0.0;
  GeometryConstants constants_used{};
  SolveStatus sdp_status = SolveStatus::Optimal;
  long sdp_iterations = 0;
};

GeometryReport geometry_report(const SensingMatrix& A, const RngStream& rng,
                               const GeometryOptions& options = {});

}  // namespace l1cert
