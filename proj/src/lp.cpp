#include "l1cert/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "l1cert/error.hpp"

namespace l1cert {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::MaxIters: return "MaxIters";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::Unbounded: return "Unbounded";
  }
  return "Unknown";
}

void LinearProgram::validate() const {
  const Index n = num_vars();
  require(n >= 1, ErrorKind::DomainError, "LP needs at least one variable");
  require(E.rows() == f.size(), ErrorKind::DomainError, "E and f row counts differ");
  require(G.rows() == h.size(), ErrorKind::DomainError, "G and h row counts differ");
  require(E.rows() == 0 || E.cols() == n, ErrorKind::DomainError, "E column count != number of variables");
  require(G.rows() == 0 || G.cols() == n, ErrorKind::DomainError, "G column count != number of variables");
  require(bounds.empty() || static_cast<Index>(bounds.size()) == n, ErrorKind::DomainError,
          "bounds length != number of variables");
  require(c.allFinite() && E.allFinite() && f.allFinite() && G.allFinite() && h.allFinite(),
          ErrorKind::NonFinite, "LP data contains non-finite entries");
}

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kPivotTol = 1e-9;
constexpr long kDegenerateSwitch = 50;

enum class ColumnKind { Structural, Slack, Artificial };

struct Column {
  ColumnKind kind;
  Index var = -1;     // original variable (structural)
  double sign = 1.0;  // x_var contribution
  Index row = -1;     // slack / artificial row
};

// Standard form  min c'z, A z = b, z >= 0, rows equilibrated and b >= 0.
struct StandardForm {
  RowMajor A;
  Vector b;
  Vector c;
  std::vector<Column> columns;
  Vector row_scale;  // standard row i = row_scale(i) * original row i (sign included)
  Index num_eq = 0;
};

StandardForm to_standard_form(const LinearProgram& lp) {
  const Index n = lp.num_vars();
  const Index meq = lp.E.rows();
  const Index mineq = lp.G.rows();
  const Index rows = meq + mineq;

  StandardForm sf;
  sf.num_eq = meq;
  for (Index j = 0; j < n; ++j) {
    const bool free = lp.bounds.empty() || lp.bounds[static_cast<std::size_t>(j)] == VarBound::Free;
    sf.columns.push_back({ColumnKind::Structural, j, 1.0, -1});
    if (free) sf.columns.push_back({ColumnKind::Structural, j, -1.0, -1});
  }
  for (Index i = 0; i < mineq; ++i) sf.columns.push_back({ColumnKind::Slack, -1, 1.0, meq + i});

  const Index cols = static_cast<Index>(sf.columns.size());
  sf.A = RowMajor::Zero(rows, cols);
  sf.b.resize(rows);
  sf.c = Vector::Zero(cols);
  sf.row_scale = Vector::Ones(rows);

  for (Index k = 0; k < cols; ++k) {
    const Column& col = sf.columns[static_cast<std::size_t>(k)];
    if (col.kind == ColumnKind::Structural) {
      sf.c(k) = col.sign * lp.c(col.var);
      for (Index i = 0; i < meq; ++i) sf.A(i, k) = col.sign * lp.E(i, col.var);
      for (Index i = 0; i < mineq; ++i) sf.A(meq + i, k) = col.sign * lp.G(i, col.var);
    } else {
      sf.A(col.row, k) = 1.0;
    }
  }
  sf.b.head(meq) = lp.f;
  sf.b.tail(mineq) = lp.h;

  for (Index i = 0; i < rows; ++i) {
    double scale = sf.A.row(i).cwiseAbs().maxCoeff();
    scale = scale > 0.0 ? 1.0 / scale : 1.0;
    if (sf.b(i) < 0.0) scale = -scale;
    sf.A.row(i) *= scale;
    sf.b(i) *= scale;
    sf.row_scale(i) = scale;
  }
  return sf;
}

class Tableau {
 public:
  Tableau(const StandardForm& sf, double tol, long max_iters)
      : sf_(sf), tol_(tol), max_iters_(max_iters) {
    rows_ = sf.A.rows();
    structural_cols_ = sf.A.cols();
    basis_.assign(static_cast<std::size_t>(rows_), -1);
    active_.assign(static_cast<std::size_t>(rows_), true);
  }

  SolveStatus run(Vector& z, std::vector<Index>& basis, std::vector<bool>& active, long& pivots);

 private:
  Index rhs_col() const { return T_.cols() - 1; }
  Index obj_row() const { return rows_; }

  void pivot(Index r, Index col);
  void crash_homogeneous_rows();
  void set_objective(const Vector& cost);
  SolveStatus iterate(Index usable_cols);
  void drive_out_artificials();

  const StandardForm& sf_;
  double tol_;
  long max_iters_;
  Index rows_ = 0;
  Index structural_cols_ = 0;  // structural + slack
  RowMajor T_;
  std::vector<Index> basis_;
  std::vector<bool> active_;
  long pivots_ = 0;
};

void Tableau::pivot(Index r, Index col) {
  const double p = T_(r, col);
  T_.row(r) /= p;
  T_(r, col) = 1.0;
  const auto pivot_row = T_.row(r);
  for (Index i = 0; i < T_.rows(); ++i) {
    if (i == r) continue;
    const double factor = T_(i, col);
    if (factor == 0.0) continue;
    T_.row(i).noalias() -= factor * pivot_row;
    T_(i, col) = 0.0;
  }
  basis_[static_cast<std::size_t>(r)] = col;
  ++pivots_;
}

// Zero-rhs equality rows accept any structural pivot without disturbing the
// right-hand side, so they never need an artificial variable.
void Tableau::crash_homogeneous_rows() {
  for (Index r = 0; r < sf_.num_eq; ++r) {
    if (T_(r, rhs_col()) != 0.0) continue;
    Index best = -1;
    double best_abs = kPivotTol;
    for (Index j = 0; j < structural_cols_; ++j) {
      const double a = std::abs(T_(r, j));
      if (a > best_abs) {
        best_abs = a;
        best = j;
      }
    }
    if (best < 0) {
      active_[static_cast<std::size_t>(r)] = false;
      T_.row(r).setZero();
      continue;
    }
    pivot(r, best);
  }
}

void Tableau::set_objective(const Vector& cost) {
  T_.row(obj_row()).setZero();
  T_.row(obj_row()).head(cost.size()) = cost.transpose();
  for (Index r = 0; r < rows_; ++r) {
    if (!active_[static_cast<std::size_t>(r)]) continue;
    const Index bj = basis_[static_cast<std::size_t>(r)];
    const double cb = T_(obj_row(), bj);
    if (cb != 0.0) T_.row(obj_row()).noalias() -= cb * T_.row(r);
  }
}

SolveStatus Tableau::iterate(Index usable_cols) {
  const double cmax = T_.row(obj_row()).head(usable_cols).cwiseAbs().maxCoeff();
  const double opt_tol = tol_ * 1e-2 * (cmax > 0.0 ? cmax : 1.0);
  long degenerate_run = 0;
  while (true) {
    if (pivots_ >= max_iters_) return SolveStatus::MaxIters;
    const bool bland = degenerate_run >= kDegenerateSwitch;
    Index enter = -1;
    double best = -opt_tol;
    for (Index j = 0; j < usable_cols; ++j) {
      const double d = T_(obj_row(), j);
      if (d < best) {
        enter = j;
        if (bland) break;
        best = d;
      }
    }
    if (enter < 0) return SolveStatus::Optimal;

    Index leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    double best_pivot = 0.0;
    for (Index r = 0; r < rows_; ++r) {
      if (!active_[static_cast<std::size_t>(r)]) continue;
      const double a = T_(r, enter);
      if (a <= kPivotTol) continue;
      const double ratio = std::max(T_(r, rhs_col()), 0.0) / a;
      bool take = false;
      const double slack = 1e-12 * (1.0 + best_ratio);
      if (leave < 0 || ratio < best_ratio - slack) {
        take = true;
      } else if (ratio <= best_ratio + slack) {
        if (bland)
          take = basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(leave)];
        else
          take = a > best_pivot;
      }
      if (take) {
        leave = r;
        best_ratio = std::min(ratio, best_ratio);
        best_pivot = a;
      }
    }
    if (leave < 0) return SolveStatus::Unbounded;
    degenerate_run = best_ratio <= 1e-12 ? degenerate_run + 1 : 0;
    pivot(leave, enter);
    for (Index r = 0; r < rows_; ++r)
      if (T_(r, rhs_col()) < 0.0 && T_(r, rhs_col()) > -1e-13) T_(r, rhs_col()) = 0.0;
  }
}

void Tableau::drive_out_artificials() {
  for (Index r = 0; r < rows_; ++r) {
    if (!active_[static_cast<std::size_t>(r)]) continue;
    if (basis_[static_cast<std::size_t>(r)] < structural_cols_) continue;
    Index best = -1;
    double best_abs = 1e-7;
    for (Index j = 0; j < structural_cols_; ++j) {
      const double a = std::abs(T_(r, j));
      if (a > best_abs) {
        best_abs = a;
        best = j;
      }
    }
    if (best >= 0) {
      pivot(r, best);
    } else {
      active_[static_cast<std::size_t>(r)] = false;
    }
  }
}

SolveStatus Tableau::run(Vector& z, std::vector<Index>& basis, std::vector<bool>& active, long& pivots) {
  // Initial tableau: structural + slack columns, rhs.
  const Index meq = sf_.num_eq;
  T_ = RowMajor::Zero(rows_ + 1, structural_cols_ + 1);
  T_.topLeftCorner(rows_, structural_cols_) = sf_.A;
  T_.col(rhs_col()).head(rows_) = sf_.b;

  // Slack basis where the row kept its sign.
  for (Index r = meq; r < rows_; ++r) {
    if (sf_.row_scale(r) > 0.0) {
      for (Index j = 0; j < structural_cols_; ++j) {
        const Column& col = sf_.columns[static_cast<std::size_t>(j)];
        if (col.kind == ColumnKind::Slack && col.row == r) {
          basis_[static_cast<std::size_t>(r)] = j;
          // Row was scaled, so normalize the slack coefficient to 1.
          T_.row(r) /= T_(r, j);
          break;
        }
      }
    }
  }
  crash_homogeneous_rows();

  std::vector<Index> art_rows;
  for (Index r = 0; r < rows_; ++r)
    if (active_[static_cast<std::size_t>(r)] && basis_[static_cast<std::size_t>(r)] < 0) art_rows.push_back(r);

  if (!art_rows.empty()) {
    const Index n_art = static_cast<Index>(art_rows.size());
    RowMajor grown = RowMajor::Zero(rows_ + 1, structural_cols_ + n_art + 1);
    grown.leftCols(structural_cols_) = T_.leftCols(structural_cols_);
    grown.col(structural_cols_ + n_art) = T_.col(rhs_col());
    T_ = std::move(grown);
    for (Index k = 0; k < n_art; ++k) {
      const Index r = art_rows[static_cast<std::size_t>(k)];
      T_(r, structural_cols_ + k) = 1.0;
      basis_[static_cast<std::size_t>(r)] = structural_cols_ + k;
    }
    Vector phase1 = Vector::Zero(structural_cols_ + n_art);
    phase1.tail(n_art).setOnes();
    set_objective(phase1);
    const SolveStatus s1 = iterate(structural_cols_ + n_art);
    if (s1 == SolveStatus::MaxIters) {
      pivots = pivots_;
      return s1;
    }
    const double infeasibility = -T_(obj_row(), rhs_col());
    const double feas_tol = tol_ * (1.0 + sf_.b.cwiseAbs().maxCoeff());
    if (infeasibility > feas_tol) {
      pivots = pivots_;
      return SolveStatus::Infeasible;
    }
    drive_out_artificials();
  }

  set_objective(sf_.c);
  const SolveStatus s2 = iterate(structural_cols_);

  z = Vector::Zero(structural_cols_);
  for (Index r = 0; r < rows_; ++r) {
    if (!active_[static_cast<std::size_t>(r)]) continue;
    const Index bj = basis_[static_cast<std::size_t>(r)];
    if (bj < structural_cols_) z(bj) = std::max(T_(r, rhs_col()), 0.0);
  }
  basis = basis_;
  active = active_;
  pivots = pivots_;
  return s2;
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options) {
  lp.validate();
  require(options.tol > 0.0, ErrorKind::DomainError, "LP tolerance must be positive");
  const Index n = lp.num_vars();
  const StandardForm sf = to_standard_form(lp);
  const Index rows = sf.A.rows();
  const Index cols = sf.A.cols();

  LpSolution sol;
  sol.x = Vector::Zero(n);
  sol.eq_multipliers = Vector::Zero(lp.E.rows());
  sol.ineq_multipliers = Vector::Zero(lp.G.rows());

  Vector z;
  std::vector<Index> basis;
  std::vector<bool> active;
  long pivots = 0;
  Tableau tableau(sf, options.tol, options.max_iters);
  sol.status = tableau.run(z, basis, active, pivots);
  sol.iterations = pivots;
  if (sol.status == SolveStatus::Infeasible || (sol.status == SolveStatus::MaxIters && z.size() == 0)) {
    sol.objective = std::numeric_limits<double>::quiet_NaN();
    sol.dual_objective = sol.objective;
    sol.primal = sol.x;
    return sol;
  }

  // Re-solve the final basis against the (equilibrated) original data.
  std::vector<Index> active_rows;
  for (Index r = 0; r < rows; ++r)
    if (active[static_cast<std::size_t>(r)]) active_rows.push_back(r);
  const Index k = static_cast<Index>(active_rows.size());
  Vector y_std = Vector::Zero(rows);
  if (k > 0) {
    Matrix B(k, k);
    Vector rhs(k);
    Vector cb(k);
    for (Index i = 0; i < k; ++i) {
      const Index r = active_rows[static_cast<std::size_t>(i)];
      rhs(i) = sf.b(r);
      const Index bj = basis[static_cast<std::size_t>(r)];
      cb(i) = sf.c(bj);
      for (Index t = 0; t < k; ++t) B(t, i) = sf.A(active_rows[static_cast<std::size_t>(t)], bj);
    }
    Eigen::FullPivLU<Matrix> lu(B);
    if (lu.isInvertible()) {
      const Vector zb = lu.solve(rhs);
      const double floor_tol = 1e-9 * (1.0 + rhs.cwiseAbs().maxCoeff());
      if (zb.minCoeff() >= -floor_tol) {
        z.setZero();
        for (Index i = 0; i < k; ++i) z(basis[static_cast<std::size_t>(active_rows[static_cast<std::size_t>(i)])]) = std::max(zb(i), 0.0);
      }
      const Vector yb = lu.transpose().solve(cb);
      for (Index i = 0; i < k; ++i) y_std(active_rows[static_cast<std::size_t>(i)]) = yb(i);
    }
  }

  for (Index j = 0; j < cols; ++j) {
    const Column& col = sf.columns[static_cast<std::size_t>(j)];
    if (col.kind == ColumnKind::Structural) sol.x(col.var) += col.sign * z(j);
  }
  const Index meq = lp.E.rows();
  for (Index r = 0; r < rows; ++r) {
    const double y = y_std(r) * sf.row_scale(r);
    if (r < meq)
      sol.eq_multipliers(r) = y;
    else
      sol.ineq_multipliers(r - meq) = y;
  }

  sol.objective = lp.c.dot(sol.x);
  sol.dual_objective = lp.f.dot(sol.eq_multipliers) + lp.h.dot(sol.ineq_multipliers);
  sol.primal = sol.x;

  double pres = 0.0;
  if (meq > 0) pres = (lp.E * sol.x - lp.f).cwiseAbs().maxCoeff();
  if (lp.G.rows() > 0) pres = std::max(pres, (lp.G * sol.x - lp.h).maxCoeff());
  sol.primal_residual = std::max(pres, 0.0);

  Vector reduced = lp.c;
  if (meq > 0) reduced.noalias() -= lp.E.transpose() * sol.eq_multipliers;
  if (lp.G.rows() > 0) reduced.noalias() -= lp.G.transpose() * sol.ineq_multipliers;
  double dres = 0.0;
  for (Index j = 0; j < n; ++j) {
    const bool free = lp.bounds.empty() || lp.bounds[static_cast<std::size_t>(j)] == VarBound::Free;
    dres = std::max(dres, free ? std::abs(reduced(j)) : -reduced(j));
  }
  if (lp.G.rows() > 0) dres = std::max(dres, sol.ineq_multipliers.maxCoeff());
  sol.dual_residual = dres;
  return sol;
}

}  // namespace l1cert
