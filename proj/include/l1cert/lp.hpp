#pragma once

#include <vector>

#include "l1cert/conic.hpp"

namespace l1cert {

enum class VarBound { Free, NonNegative };

/// minimize c'x  subject to  E x = f,  G x <= h,  x_j >= 0 where marked.
struct LinearProgram {
  Vector c;
  Matrix E;
  Vector f;
  Matrix G;
  Vector h;
  /// Empty means every variable is free.
  std::vector<VarBound> bounds;

  Index num_vars() const { return c.size(); }
  void validate() const;
};

struct LpSolution : ConicSolution {
  Vector x;
  /// Multipliers y (for E x = f) and z <= 0 (for G x <= h) such that
  /// c - E'y - G'z is >= 0 on nonnegative variables and 0 on free ones.
  Vector eq_multipliers;
  Vector ineq_multipliers;
  double dual_objective = 0.0;
};

struct LpOptions {
  double tol = 1e-8;
  long max_iters = 50000;
};

/// Dense two-phase primal simplex. Dantzig pricing, switching to Bland's rule
/// on long degenerate runs; the final basis is re-solved against the original
/// data so the reported point and multipliers carry no accumulated tableau
/// error. Infeasibility is declared when the phase-one optimum is positive.
LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options = {});

}  // namespace l1cert
