#include "mtsp/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mtsp {

BoundPair bound_pair(const Instance& instance, const Clustering& clustering,
                     const ColgenOptions& options) {
  const RateTable upper_rates = build_rate_table(instance, clustering, RateVariant::kUpper);
  const RateTable lower_rates = build_rate_table(instance, clustering, RateVariant::kLower);
  BoundPair out;
  ColgenResult lo = colgen_solve(instance, upper_rates, clustering, options);
  ColgenResult hi = colgen_solve(instance, lower_rates, clustering, options);
  out.t_lower = lo.schedule.total;
  out.t_upper = hi.schedule.total;
  out.lower_schedule = std::move(lo.schedule);
  out.upper_schedule = std::move(hi.schedule);
  return out;
}

ImprovedUpper improve_upper(const Instance& instance, const Schedule& upper_schedule) {
  return improve_upper(instance, upper_schedule, TrueRates(instance));
}

ImprovedUpper improve_upper(const Instance& instance, const Schedule& upper_schedule,
                            const RateSource& rates) {
  const std::size_t n = instance.n_links();
  const std::vector<double> served = upper_schedule.served(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(served[i] - instance.demands[i]) > 1e-6 * instance.demands[i] + 1e-9) {
      throw std::invalid_argument("schedule does not drain the demands under its own rates");
    }
  }

  ImprovedUpper out;
  for (const auto& entry : upper_schedule.entries) {
    std::vector<int> links;
    std::vector<double> quota;
    for (std::size_t p = 0; p < entry.group.size(); ++p) {
      const double q = entry.rates[p] * entry.duration;
      if (q > 0.0) {
        links.push_back(entry.group.members()[p]);
        quota.push_back(q);
      }
    }
    std::vector<double> full_quota = quota;
    std::vector<double> prev_rate;
    std::vector<int> prev_links;
    while (!links.empty()) {
      Group active(links);
      const std::vector<double> r = rates.group_rates(active);
      for (std::size_t p = 0; p < links.size(); ++p) {
        auto it = std::find(prev_links.begin(), prev_links.end(), links[p]);
        if (it != prev_links.end() && r[p] < prev_rate[it - prev_links.begin()] * (1.0 - 1e-12)) {
          ++out.rate_drops;
        }
      }
      double tau = std::numeric_limits<double>::infinity();
      for (std::size_t p = 0; p < links.size(); ++p) tau = std::min(tau, quota[p] / r[p]);
      out.schedule.entries.push_back({active, tau, r});
      out.schedule.total += tau;

      std::vector<int> next_links;
      std::vector<double> next_quota;
      std::vector<double> kept_full;
      for (std::size_t p = 0; p < links.size(); ++p) {
        const double left = quota[p] - r[p] * tau;
        if (quota[p] / r[p] <= tau || left <= 1e-12 * full_quota[p]) continue;
        next_links.push_back(links[p]);
        next_quota.push_back(left);
        kept_full.push_back(full_quota[p]);
      }
      prev_links = links;
      prev_rate = r;
      links = std::move(next_links);
      quota = std::move(next_quota);
      full_quota = std::move(kept_full);
    }
  }
  out.t_upper_improved = out.schedule.total;
  return out;
}

Approximation approximate_solve(const Instance& instance, const Clustering& clustering,
                                const ColgenOptions& options) {
  const RateTable mean_rates = build_rate_table(instance, clustering, RateVariant::kMean);
  ColgenResult res = colgen_solve(instance, mean_rates, clustering, options);
  return {res.schedule.total, std::move(res.schedule)};
}

BoundsReport compute_bounds(const Instance& instance, const Clustering& clustering,
                            std::optional<double> t_star, const ColgenOptions& options) {
  BoundsReport rep;
  const BoundPair pair = bound_pair(instance, clustering, options);
  rep.t_lower = pair.t_lower;
  rep.t_upper = pair.t_upper;
  rep.t_upper_improved = improve_upper(instance, pair.upper_schedule).t_upper_improved;
  rep.t_approx = approximate_solve(instance, clustering, options).t_approx;
  rep.t_star = t_star;
  return rep;
}

bool sandwich_holds(const BoundsReport& report, double rel_slack) {
  const double scale = report.t_star ? *report.t_star : report.t_upper;
  const double s = rel_slack * scale;
  bool ok = report.t_lower <= report.t_upper_improved + s &&
            report.t_upper_improved <= report.t_upper + s;
  if (report.t_star) {
    ok = ok && report.t_lower <= *report.t_star + s && *report.t_star <= report.t_upper_improved + s;
  }
  return ok;
}

}  // namespace mtsp
