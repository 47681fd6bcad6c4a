#pragma once

#include "mtsp/lp_core.hpp"
#include "mtsp/netmodel.hpp"
#include "mtsp/schedule.hpp"

namespace mtsp {

inline constexpr std::size_t kOracleMaxLinks = 20;

struct OracleResult {
  Schedule schedule;
  LpSolution lp;
  std::vector<int> rows;   // link index of each LP row (links with positive demand)
  std::size_t columns = 0;
};

/// Exact MTSP by enumerating every group of positive-demand links as an LP
/// column (bit patterns in increasing order) and solving once. Refuses
/// (mtsp::Refusal) when the instance has more than kOracleMaxLinks links.
OracleResult brute_force_solve(const Instance& instance, const RateSource& rates,
                               const LpOptions& options = {});

/// Length of the one-link-at-a-time schedule, sum of d_i / R_i.
double tdma_length(const Instance& instance, const RateSource& rates);

}  // namespace mtsp
