#pragma once

#include <vector>

#include "l1cert/linalg.hpp"

namespace l1cert {

/// Signal with its support under the zero test |v_i| <= 1e-9 max(1, ||v||_inf).
class SparseSignal {
 public:
  explicit SparseSignal(Vector values);

  const Vector& values() const noexcept { return values_; }
  Index size() const noexcept { return values_.size(); }
  const std::vector<Index>& support() const noexcept { return support_; }
  Index cardinality() const noexcept { return static_cast<Index>(support_.size()); }
  /// Sign of each entry on the support (+1 / -1), 0 elsewhere.
  Vector signature() const;
  bool is_ternary() const;

 private:
  Vector values_;
  std::vector<Index> support_;
};

struct DecodeResult {
  Vector x;
  double objective = 0.0;
  bool signature_subset_of_u = false;
  bool exact_match = false;
  long iterations = 0;
};

/// min ||x||_1 s.t. Ax = b. Throws Infeasible when b is not in the range of A.
DecodeResult decode_l1(const Matrix& A, const Vector& b, double tol = 1e-8);

/// min ||x||_1 s.t. Ax = b, ||x||_inf <= 1.
DecodeResult decode_l1_box(const Matrix& A, const Vector& b, double tol = 1e-8);

/// Decode A u and fill the comparison fields against the known truth.
DecodeResult decode_signal(const Matrix& A, const SparseSignal& u, bool box, double tol = 1e-8);

/// u_i z_i >= |z_i| - 1e-9 for every i.
bool check_signature(const Vector& z, const SparseSignal& u);

enum class MembershipMode {
  /// s_upper * ||u||_2 < 1.
  Literal,
  /// s_upper * ||u||_2 < 1/2: the signature argument needs
  /// ||u||_2 sup ||x||_2 <= xi / (1 + xi) for some xi < 1.
  ProofSafe,
};

/// Sufficient test for u being recovered with its signature. u = 0 passes.
/// Throws DomainError unless u is in {-1, 0, 1}^n.
bool membership_u_sufficient(const SparseSignal& u, double s_upper, MembershipMode mode);

/// Sum of the n - s smallest magnitudes; ties keep the lower index.
double best_k_term_error(const Vector& u, Index s);

struct ErrorBoundCheck {
  bool holds = false;
  bool exactness_required = false;
  bool exact = false;
  double error_l1 = 0.0;
  double bound = 0.0;
};

/// Decodes A u and checks: Card(u) <= S/4 implies exact recovery, and
/// ||u - x||_1 <= 4 best_k_term_error(u, floor(S/16)) + 1e-6.
ErrorBoundCheck verify_error_bound(const Matrix& A, const Vector& u, double S, double tol = 1e-8);

}  // namespace l1cert
