#pragma once

#include <vector>

#include "mtsp/clustering.hpp"
#include "mtsp/lp_core.hpp"
#include "mtsp/netmodel.hpp"
#include "mtsp/schedule.hpp"

namespace mtsp {

struct PricingResult {
  Group group;
  Profile profile;
  double reduced_cost = 1.0;   // 1 - sum_i r_iC * pi_i
};

/// Exact pricing over MCCR profiles: within each cluster the links are
/// ranked by dual (descending, then index) and every profile is scored with
/// the prefix sums of those ranks. Ties go to the lexicographically smallest
/// profile.
PricingResult price(std::span<const double> duals, const RateTable& table,
                    const Clustering& clustering);

/// Same as price(), but only links with eligible[i] set may join the group.
PricingResult price(std::span<const double> duals, const RateTable& table,
                    const Clustering& clustering, const std::vector<bool>& eligible);

struct ColgenOptions {
  double eps = 1e-9;
  LpOptions lp;
};

struct ColgenResult {
  Schedule schedule;
  int iterations = 0;                     // master solves
  std::size_t columns = 0;                // master columns at termination
  std::vector<double> objective_history;  // master objective per solve
  std::vector<double> added_reduced_costs;
  std::vector<double> duals;              // final master duals, length N
  double final_reduced_cost = 1.0;
  bool bland_fallback = false;
};

/// Column generation for the MTSP under an MCCR table, seeded with TDMA
/// columns. Throws mtsp::SolverStall past 10 * prod(n_j + 1) iterations.
ColgenResult colgen_solve(const Instance& instance, const RateTable& table,
                          const Clustering& clustering, const ColgenOptions& options = {});

}  // namespace mtsp
