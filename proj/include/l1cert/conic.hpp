#pragma once

#include <string_view>

#include "l1cert/linalg.hpp"

namespace l1cert {

enum class SolveStatus { Optimal, MaxIters, Infeasible, Unbounded };

std::string_view to_string(SolveStatus status);

/// Common result shape for the LP and split-SDP solvers. `primal` holds the
/// LP point as an n x 1 column or the SDP matrix iterate.
struct ConicSolution {
  SolveStatus status = SolveStatus::MaxIters;
  double objective = 0.0;
  Matrix primal;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  long iterations = 0;

  bool optimal() const noexcept { return status == SolveStatus::Optimal; }
};

}  // namespace l1cert
