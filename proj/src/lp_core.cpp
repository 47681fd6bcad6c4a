#include "mtsp/lp_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "mtsp/errors.hpp"

namespace mtsp {

LpProblem::LpProblem(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), a_(rows * cols, 0.0), b_(rows, 0.0), c_(cols, 0.0) {}

std::size_t LpProblem::add_column(std::span<const double> entries, double cost) {
  if (entries.size() != rows_) throw std::invalid_argument("column length differs from row count");
  a_.insert(a_.end(), entries.begin(), entries.end());
  c_.push_back(cost);
  return cols_++;
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "?";
}

namespace {

// Revised simplex over the row-scaled problem D A x = D b with an explicit
// dense basis inverse. Variables 0..n-1 are structural, n..n+m-1 are the
// phase-1 artificials (identity columns in scaled space).
class Simplex {
 public:
  Simplex(const LpProblem& p, const LpOptions& o) : p_(p), o_(o), m_(p.rows()), n_(p.cols()) {
    if (m_ == 0 || n_ == 0) throw std::invalid_argument("LP needs at least one row and column");
    if (p.b().size() != m_ || p.c().size() != n_) throw std::invalid_argument("LP dimension mismatch");
    for (std::size_t j = 0; j < n_; ++j) {
      if (!std::isfinite(p.c()[j])) throw std::invalid_argument("non-finite cost");
      for (double v : p.column(j)) {
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite constraint coefficient");
      }
    }
    scale_.assign(m_, 1.0);
    std::vector<double> row_max(m_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      auto col = p.column(j);
      for (std::size_t i = 0; i < m_; ++i) row_max[i] = std::max(row_max[i], std::abs(col[i]));
    }
    b_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      if (!std::isfinite(p.b()[i])) throw std::invalid_argument("non-finite right-hand side");
      double s = row_max[i] > 0.0 ? 1.0 / row_max[i] : 1.0;
      if (p.b()[i] < 0.0) s = -s;
      scale_[i] = s;
      b_[i] = s * p.b()[i];
    }
    b_norm_ = 0.0;
    for (double v : b_) b_norm_ = std::max(b_norm_, std::abs(v));
    double c_norm = 0.0;
    for (double v : p.c()) c_norm = std::max(c_norm, std::abs(v));
    opt_tol_phase2_ = o_.optimality_tol * std::max(1.0, c_norm);
    max_iter_ = o_.max_iterations > 0 ? o_.max_iterations : static_cast<int>(50 * (m_ + n_));
    is_basic_.assign(n_ + m_, false);
  }

  LpSolution run_cold() {
    // phase 1 from the all-artificial basis
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      basis_[i] = n_ + i;
      is_basic_[n_ + i] = true;
    }
    binv_.assign(m_ * m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) binv_[i * m_ + i] = 1.0;
    xb_ = b_;
    phase_ = 1;
    bland_ = o_.force_bland;
    LpStatus st = iterate();
    if (st == LpStatus::kUnbounded) throw SolverStall("phase 1 reported an unbounded ray");
    double infeas = 0.0;
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] >= n_) infeas += std::max(0.0, xb_[r]);
    }
    if (infeas > o_.feasibility_tol * (1.0 + b_norm_)) return finish(LpStatus::kInfeasible);
    drive_out_artificials();
    return run_phase2();
  }

  LpSolution run_warm(std::span<const std::size_t> hint) {
    if (hint.size() != m_) return run_cold();
    basis_.assign(hint.begin(), hint.end());
    for (std::size_t col : basis_) {
      if (col >= n_ || is_basic_[col]) return reset_and_cold();
      is_basic_[col] = true;
    }
    if (!refactor()) return reset_and_cold();
    for (double& v : xb_) {
      if (v < -o_.feasibility_tol * (1.0 + b_norm_)) return reset_and_cold();
      v = std::max(v, 0.0);
    }
    warm_ = true;
    return run_phase2();
  }

 private:
  LpSolution reset_and_cold() {
    std::fill(is_basic_.begin(), is_basic_.end(), false);
    return run_cold();
  }

  LpSolution run_phase2() {
    phase_ = 2;
    bland_ = o_.force_bland;
    consecutive_degenerate_ = 0;
    LpStatus st = iterate();
    return finish(st);
  }

  double cost(std::size_t var) const {
    if (phase_ == 1) return var >= n_ ? 1.0 : 0.0;
    return var >= n_ ? 0.0 : p_.c()[var];
  }

  // scaled column of variable `var` into `out`
  void load_column(std::size_t var, std::vector<double>& out) const {
    out.assign(m_, 0.0);
    if (var >= n_) {
      out[var - n_] = 1.0;
      return;
    }
    auto col = p_.column(var);
    for (std::size_t i = 0; i < m_; ++i) out[i] = scale_[i] * col[i];
  }

  void compute_duals(std::vector<double>& pi) const {
    pi.assign(m_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      const double cb = cost(basis_[r]);
      if (cb == 0.0) continue;
      const double* row = &binv_[r * m_];
      for (std::size_t k = 0; k < m_; ++k) pi[k] += cb * row[k];
    }
  }

  double reduced_cost(std::size_t j, const std::vector<double>& w) const {
    auto col = p_.column(j);
    double d = cost(j);
    for (std::size_t i = 0; i < m_; ++i) d -= w[i] * col[i];
    return d;
  }

  LpStatus iterate() {
    const double opt_tol = phase_ == 1 ? o_.optimality_tol : opt_tol_phase2_;
    std::vector<double> pi, w(m_), u;
    int since_refactor = 0;
    while (true) {
      compute_duals(pi);
      for (std::size_t i = 0; i < m_; ++i) w[i] = pi[i] * scale_[i];

      // pricing over structural columns; artificials never re-enter
      std::size_t entering = n_;
      double best = -opt_tol;
      for (std::size_t j = 0; j < n_; ++j) {
        if (is_basic_[j]) continue;
        const double d = reduced_cost(j, w);
        if (d < best) {
          best = d;
          entering = j;
          if (bland_) break;
        }
      }
      if (entering == n_) return LpStatus::kOptimal;

      if (iterations_ >= max_iter_) {
        throw SolverStall("simplex iteration cap reached (" + std::to_string(max_iter_) + ")");
      }

      load_column(entering, u);
      std::vector<double> dir(m_, 0.0);
      for (std::size_t r = 0; r < m_; ++r) {
        const double* row = &binv_[r * m_];
        double s = 0.0;
        for (std::size_t k = 0; k < m_; ++k) s += row[k] * u[k];
        dir[r] = s;
      }

      // ratio test
      std::size_t leave = m_;
      double theta = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < m_; ++r) {
        if (dir[r] <= o_.pivot_tol) continue;
        const double ratio = std::max(xb_[r], 0.0) / dir[r];
        bool take = false;
        if (leave == m_ || ratio < theta - 1e-12 * (1.0 + theta)) {
          take = true;
        } else if (ratio <= theta + 1e-12 * (1.0 + theta)) {
          take = bland_ ? basis_[r] < basis_[leave] : dir[r] > dir[leave];
        }
        if (take) {
          leave = r;
          theta = ratio;
        }
      }
      if (leave == m_) return LpStatus::kUnbounded;

      pivot(leave, entering, dir, theta);
      ++iterations_;

      if (theta <= o_.pivot_tol) {
        ++degenerate_pivots_;
        if (++consecutive_degenerate_ >= static_cast<int>(10 * m_) && !bland_) {
          bland_ = true;
          bland_engaged_ = true;
        }
      } else {
        consecutive_degenerate_ = 0;
        if (!o_.force_bland) bland_ = false;
      }

      if (++since_refactor >= o_.refactor_interval) {
        since_refactor = 0;
        if (!refactor()) throw SolverStall("basis became numerically singular");
        for (double& v : xb_) v = std::max(v, 0.0);
      }
    }
  }

  void pivot(std::size_t leave, std::size_t entering, const std::vector<double>& dir, double theta) {
    for (std::size_t r = 0; r < m_; ++r) xb_[r] -= theta * dir[r];
    xb_[leave] = theta;
    const double piv = dir[leave];
    double* prow = &binv_[leave * m_];
    for (std::size_t k = 0; k < m_; ++k) prow[k] /= piv;
    for (std::size_t r = 0; r < m_; ++r) {
      if (r == leave || dir[r] == 0.0) continue;
      double* row = &binv_[r * m_];
      const double f = dir[r];
      for (std::size_t k = 0; k < m_; ++k) row[k] -= f * prow[k];
    }
    is_basic_[basis_[leave]] = false;
    is_basic_[entering] = true;
    basis_[leave] = entering;
  }

  // Gauss-Jordan inversion of the current basis; false when singular.
  bool refactor() {
    std::vector<double> bmat(m_ * m_);
    std::vector<double> col;
    for (std::size_t r = 0; r < m_; ++r) {
      load_column(basis_[r], col);
      for (std::size_t i = 0; i < m_; ++i) bmat[i * m_ + r] = col[i];
    }
    std::vector<double> inv(m_ * m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) inv[i * m_ + i] = 1.0;
    for (std::size_t c = 0; c < m_; ++c) {
      std::size_t piv = c;
      for (std::size_t r = c + 1; r < m_; ++r) {
        if (std::abs(bmat[r * m_ + c]) > std::abs(bmat[piv * m_ + c])) piv = r;
      }
      if (std::abs(bmat[piv * m_ + c]) < 1e-13) return false;
      if (piv != c) {
        for (std::size_t k = 0; k < m_; ++k) {
          std::swap(bmat[piv * m_ + k], bmat[c * m_ + k]);
          std::swap(inv[piv * m_ + k], inv[c * m_ + k]);
        }
      }
      const double d = bmat[c * m_ + c];
      for (std::size_t k = 0; k < m_; ++k) {
        bmat[c * m_ + k] /= d;
        inv[c * m_ + k] /= d;
      }
      for (std::size_t r = 0; r < m_; ++r) {
        if (r == c) continue;
        const double f = bmat[r * m_ + c];
        if (f == 0.0) continue;
        for (std::size_t k = 0; k < m_; ++k) {
          bmat[r * m_ + k] -= f * bmat[c * m_ + k];
          inv[r * m_ + k] -= f * inv[c * m_ + k];
        }
      }
    }
    binv_ = std::move(inv);
    xb_.assign(m_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      double s = 0.0;
      for (std::size_t k = 0; k < m_; ++k) s += binv_[r * m_ + k] * b_[k];
      xb_[r] = s;
    }
    return true;
  }

  // Pivots zero-level artificials out of the basis where a structural column
  // can replace them; rows where none can are redundant and keep theirs.
  void drive_out_artificials() {
    std::vector<double> u, dir(m_);
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < n_) continue;
      const double* row = &binv_[r * m_];
      std::size_t pick = n_;
      double best = o_.pivot_tol;
      for (std::size_t j = 0; j < n_; ++j) {
        if (is_basic_[j]) continue;
        auto col = p_.column(j);
        double s = 0.0;
        for (std::size_t i = 0; i < m_; ++i) s += row[i] * scale_[i] * col[i];
        if (std::abs(s) > best) {
          best = std::abs(s);
          pick = j;
        }
      }
      if (pick == n_) continue;
      load_column(pick, u);
      for (std::size_t q = 0; q < m_; ++q) {
        const double* qrow = &binv_[q * m_];
        double s = 0.0;
        for (std::size_t k = 0; k < m_; ++k) s += qrow[k] * u[k];
        dir[q] = s;
      }
      pivot(r, pick, dir, xb_[r] / dir[r]);
      ++iterations_;
    }
    if (!refactor()) throw SolverStall("basis became singular after phase 1");
    for (double& v : xb_) v = std::max(v, 0.0);
  }

  LpSolution finish(LpStatus st) {
    LpSolution sol;
    sol.status = st;
    sol.iterations = iterations_;
    sol.degenerate_pivots = degenerate_pivots_;
    sol.bland_engaged = bland_engaged_;
    sol.warm_started = warm_;
    if (st != LpStatus::kOptimal) return sol;

    if (!refactor()) throw SolverStall("final basis is singular");
    sol.x.assign(n_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < n_) {
        sol.x[basis_[r]] = std::max(xb_[r], 0.0);
        sol.basis.push_back(basis_[r]);
      }
    }
    std::vector<double> pi;
    compute_duals(pi);
    sol.duals.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) sol.duals[i] = pi[i] * scale_[i];
    sol.objective = 0.0;
    for (std::size_t j = 0; j < n_; ++j) sol.objective += p_.c()[j] * sol.x[j];
    return sol;
  }

  const LpProblem& p_;
  const LpOptions& o_;
  std::size_t m_;
  std::size_t n_;
  std::vector<double> scale_;
  std::vector<double> b_;
  double b_norm_ = 0.0;
  double opt_tol_phase2_ = 0.0;
  int max_iter_ = 0;

  std::vector<std::size_t> basis_;
  std::vector<bool> is_basic_;
  std::vector<double> binv_;
  std::vector<double> xb_;
  int phase_ = 1;
  bool bland_ = false;
  bool bland_engaged_ = false;
  bool warm_ = false;
  int iterations_ = 0;
  int degenerate_pivots_ = 0;
  int consecutive_degenerate_ = 0;
};

}  // namespace

LpSolution solve(const LpProblem& problem, const LpOptions& options) {
  Simplex s(problem, options);
  return s.run_cold();
}

LpSolution warm_solve(const LpProblem& problem, std::span<const std::size_t> basis_hint,
                      const LpOptions& options) {
  Simplex s(problem, options);
  if (basis_hint.empty()) return s.run_cold();
  return s.run_warm(basis_hint);
}

}  // namespace mtsp
