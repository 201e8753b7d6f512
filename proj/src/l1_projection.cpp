#include "l1cert/l1_projection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "l1cert/error.hpp"

namespace l1cert {

void project_weighted_l1_ball(std::span<double> values, std::span<const double> weights, double radius) {
  require(values.size() == weights.size(), ErrorKind::DomainError, "values/weights length mismatch");
  require(radius >= 0.0, ErrorKind::DomainError, "ell_1 radius must be nonnegative");
  const std::size_t n = values.size();
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) norm += weights[i] * std::abs(values[i]);
  if (norm <= radius) return;
  if (radius == 0.0) {
    std::fill(values.begin(), values.end(), 0.0);
    return;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double fa = std::abs(values[a]);
    const double fb = std::abs(values[b]);
    return fa > fb || (fa == fb && a < b);
  });

  // theta_k = (sum_{j<=k} w_j |v_j| - r) / sum_{j<=k} w_j; keep the last k
  // whose |v_(k)| still exceeds theta_k.
  double weight_sum = 0.0;
  double weighted_abs = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = order[k];
    const double a = std::abs(values[i]);
    const double next_w = weight_sum + weights[i];
    const double next_wa = weighted_abs + weights[i] * a;
    const double candidate = (next_wa - radius) / next_w;
    if (a <= candidate) break;
    weight_sum = next_w;
    weighted_abs = next_wa;
    theta = candidate;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::abs(values[i]) - theta;
    values[i] = a > 0.0 ? std::copysign(a, values[i]) : 0.0;
  }
}

Vector project_l1_ball(const Vector& v, double radius) {
  Vector out = v;
  const std::vector<double> w(static_cast<std::size_t>(v.size()), 1.0);
  project_weighted_l1_ball(std::span<double>(out.data(), static_cast<std::size_t>(out.size())), w, radius);
  return out;
}

Matrix project_l1_ball_symmetric(const Matrix& M, double radius) {
  const Index n = M.rows();
  require(M.cols() == n, ErrorKind::DomainError, "symmetric projection needs a square matrix");
  const std::size_t count = static_cast<std::size_t>(n * (n + 1) / 2);
  std::vector<double> packed;
  std::vector<double> weights;
  packed.reserve(count);
  weights.reserve(count);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i <= j; ++i) {
      packed.push_back(i == j ? M(i, i) : 0.5 * (M(i, j) + M(j, i)));
      weights.push_back(i == j ? 1.0 : 2.0);
    }
  }
  project_weighted_l1_ball(packed, weights, radius);
  Matrix out(n, n);
  std::size_t k = 0;
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i <= j; ++i) {
      out(i, j) = packed[k];
      out(j, i) = packed[k];
      ++k;
    }
  }
  return out;
}

}  // namespace l1cert
