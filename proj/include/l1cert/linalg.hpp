#pragma once

#include <Eigen/Dense>

#include <string>

#include "l1cert/rng.hpp"

namespace l1cert {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Orthonormal basis F (n x (n-m)) of the nullspace of an m x n matrix.
struct NullspaceBasis {
  Index parent_rows = 0;
  Index parent_cols = 0;
  Matrix F;

  Index dim() const { return F.cols(); }
};

struct SymmetricEigen {
  Vector values;   // ascending
  Matrix vectors;  // columns are eigenvectors
};

void require_finite(const Matrix& M, const std::string& what);

/// Numerical rank with tolerance rel_tol * sigma_max.
Index numerical_rank(const Matrix& A, double rel_tol = 1e-10);

/// Nullspace basis of any matrix (possibly empty, possibly rank deficient).
/// Columns come from the trailing right singular vectors, sign-normalized so
/// the first entry with |v_i| > 1e-12 is positive.
Matrix nullspace_of(const Matrix& A, double rel_tol = 1e-10);

/// Strict version for sensing matrices: requires m < n and full row rank.
NullspaceBasis nullspace_basis(const Matrix& A);

SymmetricEigen symmetric_eigen(const Matrix& M);

/// Frobenius-nearest PSD matrix of the symmetrized input.
Matrix project_psd(const Matrix& M);

Matrix symmetrize(const Matrix& M);

Matrix gaussian_matrix(Index m, Index n, RngStream& rng);
Matrix rademacher_matrix(Index m, Index n, RngStream& rng);

/// Sum of |entries|.
double entrywise_l1(const Matrix& M);

/// Pairwise (cascade) summation; the result does not depend on thread layout.
double pairwise_sum(const double* data, std::size_t count);

/// Sensing matrix with its numerical rank and nullspace basis cached.
class SensingMatrix {
 public:
  explicit SensingMatrix(Matrix A);

  const Matrix& matrix() const noexcept { return A_; }
  Index rows() const noexcept { return A_.rows(); }
  Index cols() const noexcept { return A_.cols(); }
  Index rank() const noexcept { return rank_; }
  /// n x (n - rank), orthonormal columns.
  const Matrix& nullspace() const noexcept { return F_; }
  bool trivial_nullspace() const noexcept { return F_.cols() == 0; }

 private:
  Matrix A_;
  Index rank_ = 0;
  Matrix F_;
};

}  // namespace l1cert
