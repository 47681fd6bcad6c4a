#pragma once

#include <vector>

#include "mtsp/clustering.hpp"
#include "mtsp/lp_core.hpp"
#include "mtsp/netmodel.hpp"

namespace mtsp {

/// Polynomial-size dual of the MTSP under MCCR rates.
///
/// One "<= 1" row per profile, applied to the links of largest demand in each
/// cluster, plus a per-cluster chain pi_(j,1) >= pi_(j,2) >= ... >= 0 in
/// demand order.
struct ReducedDual {
  struct ProfileRow {
    std::size_t profile_index;
    std::vector<int> links;            // links on the left-hand side
    std::vector<double> coefficients;  // rate of each link
  };
  struct ChainRow {
    int higher;  // pi_higher >= pi_lower
    int lower;
  };

  std::size_t n_links = 0;
  std::vector<ProfileRow> profile_rows;
  std::vector<ChainRow> chain_rows;
  std::vector<double> objective;  // demands

  std::size_t constraint_count() const { return profile_rows.size() + chain_rows.size(); }
};

ReducedDual build_reduced_dual(const Instance& instance, const RateTable& table,
                               const Clustering& clustering);

struct ReducedDualSolution {
  double objective = 0.0;     // equals the minimum schedule length
  std::vector<double> duals;  // pi per link
  std::size_t lp_rows = 0;
  std::size_t lp_cols = 0;
  int iterations = 0;
};

ReducedDualSolution reduced_dual_solve(const Instance& instance, const RateTable& table,
                                       const Clustering& clustering, const LpOptions& options = {});

/// Largest violation of the reduced dual's constraints by `duals`
/// (0 when feasible).
double reduced_dual_violation(const ReducedDual& dual, std::span<const double> duals);

}  // namespace mtsp
