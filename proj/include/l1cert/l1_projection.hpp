#pragma once

#include <span>

#include "l1cert/linalg.hpp"

namespace l1cert {

/// Euclidean projection onto {z : sum_i w_i |z_i| <= radius} in the metric
/// sum_i w_i (z_i - v_i)^2. The minimizer is a common soft threshold, found
/// by sorting |v| in decreasing order. Weights must be positive.
void project_weighted_l1_ball(std::span<double> values, std::span<const double> weights,
                              double radius);

Vector project_l1_ball(const Vector& v, double radius);

/// Frobenius projection of a symmetric matrix onto {X : sum_ij |X_ij| <= radius}.
/// Works on the upper triangle with off-diagonal weight 2, so the result is
/// exactly symmetric.
Matrix project_l1_ball_symmetric(const Matrix& M, double radius);

}  // namespace l1cert
