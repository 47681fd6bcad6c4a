#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mtsp {

/// min c'x  s.t.  Ax = b, x >= 0, with A stored column-major.
class LpProblem {
 public:
  LpProblem(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& a(std::size_t row, std::size_t col) { return a_[col * rows_ + row]; }
  double a(std::size_t row, std::size_t col) const { return a_[col * rows_ + row]; }
  std::span<const double> column(std::size_t col) const { return {a_.data() + col * rows_, rows_}; }

  std::vector<double>& b() { return b_; }
  const std::vector<double>& b() const { return b_; }
  std::vector<double>& c() { return c_; }
  const std::vector<double>& c() const { return c_; }

  /// Appends a column and returns its index.
  std::size_t add_column(std::span<const double> entries, double cost);

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> a_;
  std::vector<double> b_;
  std::vector<double> c_;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  std::vector<double> duals;
  double objective = 0.0;
  std::vector<std::size_t> basis;  // structural columns in the final basis
  int iterations = 0;
  int degenerate_pivots = 0;
  bool bland_engaged = false;
  bool warm_started = false;
};

struct LpOptions {
  double pivot_tol = 1e-9;
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-9;
  int max_iterations = 0;  // 0 selects 50 * (m + n)
  bool force_bland = false;
  int refactor_interval = 64;
};

/// Dense two-phase primal simplex. Rows are equilibrated before solving and
/// duals are returned in the caller's scaling. Throws mtsp::SolverStall when
/// the iteration cap is hit.
LpSolution solve(const LpProblem& problem, const LpOptions& options = {});

/// Like solve(), but starts phase 2 from `basis_hint` when it names a
/// nonsingular, primal-feasible basis. Falls back to a cold solve otherwise.
LpSolution warm_solve(const LpProblem& problem, std::span<const std::size_t> basis_hint,
                      const LpOptions& options = {});

const char* to_string(LpStatus status);

}  // namespace mtsp
