#pragma once

#include <vector>

#include "mtsp/netmodel.hpp"

namespace mtsp {

struct ScheduleEntry {
  Group group;
  double duration = 0.0;       // seconds, > 0
  std::vector<double> rates;   // per member of `group`, at activation
};

struct Schedule {
  std::vector<ScheduleEntry> entries;
  double total = 0.0;

  /// Demand served per link, sum of rate * duration over entries.
  std::vector<double> served(std::size_t n_links) const;
};

/// Replays a schedule against demands with rates from `rates`; returns
/// d_i minus the bits served (negative when over-served).
std::vector<double> simulate_schedule(const Instance& instance, const Schedule& schedule,
                                      const RateSource& rates);

}  // namespace mtsp
