#include "l1cert/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "l1cert/error.hpp"

namespace l1cert {

void require_finite(const Matrix& M, const std::string& what) {
  require(M.allFinite(), ErrorKind::NonFinite, what + " contains non-finite entries");
}

Index numerical_rank(const Matrix& A, double rel_tol) {
  if (A.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(A);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cutoff = rel_tol * s(0);
  return static_cast<Index>((s.array() > cutoff).count());
}

namespace {

void normalize_column_signs(Matrix& F) {
  for (Index j = 0; j < F.cols(); ++j) {
    for (Index i = 0; i < F.rows(); ++i) {
      if (std::abs(F(i, j)) > 1e-12) {
        if (F(i, j) < 0) F.col(j) = -F.col(j);
        break;
      }
    }
  }
}

}  // namespace

Matrix nullspace_of(const Matrix& A, double rel_tol) {
  const Index n = A.cols();
  if (A.rows() == 0) return Matrix::Identity(n, n);
  require_finite(A, "matrix");
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  const double cutoff = s.size() > 0 ? rel_tol * s(0) : 0.0;
  Index rank = 0;
  if (s.size() > 0 && s(0) > 0.0) rank = static_cast<Index>((s.array() > cutoff).count());
  Matrix F = svd.matrixV().rightCols(n - rank);
  normalize_column_signs(F);
  return F;
}

NullspaceBasis nullspace_basis(const Matrix& A) {
  const Index m = A.rows();
  const Index n = A.cols();
  require(m >= 1 && n >= 1, ErrorKind::DomainError, "empty matrix");
  require(m < n, ErrorKind::NotUnderdetermined,
          "nullspace basis needs m < n, got " + std::to_string(m) + "x" + std::to_string(n));
  require_finite(A, "matrix");
  const Index rank = numerical_rank(A);
  require(rank == m, ErrorKind::RankDeficient,
          "numerical rank " + std::to_string(rank) + " < " + std::to_string(m));
  NullspaceBasis basis;
  basis.parent_rows = m;
  basis.parent_cols = n;
  basis.F = nullspace_of(A);
  return basis;
}

Matrix symmetrize(const Matrix& M) { return 0.5 * (M + M.transpose()); }

SymmetricEigen symmetric_eigen(const Matrix& M) {
  require(M.rows() == M.cols(), ErrorKind::DomainError, "eigendecomposition needs a square matrix");
  require_finite(M, "symmetric matrix");
  SymmetricEigen out;
  if (M.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrize(M));
  require(eig.info() == Eigen::Success, ErrorKind::SolverFailure, "eigensolver did not converge");
  out.values = eig.eigenvalues();
  out.vectors = eig.eigenvectors();
  return out;
}

Matrix project_psd(const Matrix& M) {
  const Index n = M.rows();
  if (n == 0) return M;
  auto eig = symmetric_eigen(M);
  const Index first_positive = static_cast<Index>(
      std::find_if(eig.values.data(), eig.values.data() + n, [](double v) { return v > 0.0; }) -
      eig.values.data());
  const Index k = n - first_positive;
  if (k == 0) return Matrix::Zero(n, n);
  const auto V = eig.vectors.rightCols(k);
  const auto lambda = eig.values.tail(k);
  Matrix out = V * lambda.asDiagonal() * V.transpose();
  return symmetrize(out);
}

Matrix gaussian_matrix(Index m, Index n, RngStream& rng) {
  require(m >= 1 && n >= 1, ErrorKind::DomainError, "gaussian_matrix needs m, n >= 1");
  Matrix A(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) A(i, j) = rng.normal();
  return A;
}

Matrix rademacher_matrix(Index m, Index n, RngStream& rng) {
  require(m >= 1 && n >= 1, ErrorKind::DomainError, "rademacher_matrix needs m, n >= 1");
  Matrix A(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) A(i, j) = (rng.next_u64() >> 63) ? 1.0 : -1.0;
  return A;
}

double entrywise_l1(const Matrix& M) { return M.cwiseAbs().sum(); }

double pairwise_sum(const double* data, std::size_t count) {
  if (count <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += data[i];
    return s;
  }
  const std::size_t half = count / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, count - half);
}

SensingMatrix::SensingMatrix(Matrix A) : A_(std::move(A)) {
  require(A_.rows() >= 1 && A_.cols() >= 1, ErrorKind::DomainError, "empty sensing matrix");
  require_finite(A_, "sensing matrix");
  rank_ = numerical_rank(A_);
  F_ = nullspace_of(A_);
}

}  // namespace l1cert
