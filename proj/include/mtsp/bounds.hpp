#pragma once

#include <optional>

#include "mtsp/clustering.hpp"
#include "mtsp/colgen.hpp"
#include "mtsp/netmodel.hpp"
#include "mtsp/schedule.hpp"

namespace mtsp {

struct BoundPair {
  double t_lower = 0.0;   // from the UPPER-rate table
  double t_upper = 0.0;   // from the LOWER-rate table
  Schedule lower_schedule;
  Schedule upper_schedule;
};

BoundPair bound_pair(const Instance& instance, const Clustering& clustering,
                     const ColgenOptions& options = {});

struct ImprovedUpper {
  double t_upper_improved = 0.0;
  Schedule schedule;       // feasible under the replay rates
  int rate_drops = 0;      // number of times a surviving link's rate fell after a shrink
};

/// Replays `upper_schedule` entry by entry under `rates`. Each entry drains
/// exactly the bits it served in the bounding schedule; links whose quota
/// empties leave the group and the rest continue at the shrunken group's
/// rates. Throws std::invalid_argument when the schedule does not serve the
/// instance's demands.
ImprovedUpper improve_upper(const Instance& instance, const Schedule& upper_schedule,
                            const RateSource& rates);
ImprovedUpper improve_upper(const Instance& instance, const Schedule& upper_schedule);

struct Approximation {
  double t_approx = 0.0;
  Schedule schedule;   // feasible for the mean-radius rates only
};

Approximation approximate_solve(const Instance& instance, const Clustering& clustering,
                                const ColgenOptions& options = {});

struct BoundsReport {
  double t_lower = 0.0;
  double t_upper = 0.0;
  double t_upper_improved = 0.0;
  double t_approx = 0.0;
  std::optional<double> t_star;
};

BoundsReport compute_bounds(const Instance& instance, const Clustering& clustering,
                            std::optional<double> t_star = std::nullopt,
                            const ColgenOptions& options = {});

/// Checks the sandwich t_lower <= t_star <= t_upper_improved <= t_upper.
bool sandwich_holds(const BoundsReport& report, double rel_slack = 1e-6);

}  // namespace mtsp
