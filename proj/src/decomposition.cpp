#include "mtsp/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mtsp/errors.hpp"

namespace mtsp {

namespace {

constexpr double kSumRateSlack = 1e-12;

bool at_least(double lhs, double rhs) { return lhs >= rhs - kSumRateSlack * std::abs(rhs); }

double sum_rate_at(std::size_t index, std::span<const int> counts, const RateTable& table) {
  double s = 0.0;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (counts[j] > 0) s += counts[j] * table.rate_at(index, static_cast<int>(j));
  }
  return s;
}

}  // namespace

double sum_rate(const Profile& profile, const RateTable& table) {
  return sum_rate_at(table.index_of(profile), profile.counts, table);
}

DecompositionReport analyze_decomposition(const RateTable& table) {
  const int k = table.cluster_count();
  DecompositionReport rep;
  rep.witness_counts.assign(k, 0);
  rep.best_intra_sum_rate.assign(k, 0.0);
  table.for_each_profile([&](std::size_t index, std::span<const int> counts) {
    ++rep.profiles_checked;
    int nonzero = 0;
    int only = -1;
    for (int j = 0; j < k; ++j) {
      if (counts[j] > 0) {
        ++nonzero;
        only = j;
      }
    }
    const double s = sum_rate_at(index, counts, table);
    if (nonzero == 1) {
      if (s > rep.best_intra_sum_rate[only]) {
        rep.best_intra_sum_rate[only] = s;
        rep.witness_counts[only] = counts[only];
      }
    } else {
      rep.max_inter_sum_rate = std::max(rep.max_inter_sum_rate, s);
    }
  });

  rep.condition_t2 = true;
  rep.condition_t3 = true;
  for (int j = 0; j < k; ++j) {
    Profile solo{std::vector<int>(k, 0)};
    solo.counts[j] = 1;
    const double solo_rate = table.rate(j, solo);
    rep.condition_t2 = rep.condition_t2 && at_least(rep.best_intra_sum_rate[j], rep.max_inter_sum_rate);
    rep.condition_t3 = rep.condition_t3 && at_least(solo_rate, rep.max_inter_sum_rate);
  }
  return rep;
}

DecompositionReport check_theorem2(const RateTable& table) {
  DecompositionReport rep = analyze_decomposition(table);
  rep.condition_t3 = false;
  return rep;
}

DecompositionReport check_theorem3(const RateTable& table) {
  DecompositionReport rep = analyze_decomposition(table);
  rep.condition_t2 = false;
  return rep;
}

bool uniform_cluster_demands(const Instance& instance, const Clustering& clustering) {
  for (int j = 0; j < clustering.k(); ++j) {
    double lo = INFINITY;
    double hi = -INFINITY;
    for (int link : clustering.members(j)) {
      lo = std::min(lo, instance.demands[link]);
      hi = std::max(hi, instance.demands[link]);
    }
    if (hi - lo > 1e-12 * std::abs(hi)) return false;
  }
  return true;
}

DecomposedResult decomposed_solve(const Instance& instance, const RateTable& table,
                                  const Clustering& clustering, const ColgenOptions& options) {
  if (clustering.n_points() != instance.n_links() || table.cluster_sizes() != clustering.sizes()) {
    throw std::invalid_argument("instance, clustering and rate table disagree");
  }
  const DecompositionReport rep = analyze_decomposition(table);
  const bool uniform = uniform_cluster_demands(instance, clustering);
  DecomposedResult out;
  if (uniform && rep.condition_t2) {
    out.used_t3 = false;
  } else if (rep.condition_t3) {
    out.used_t3 = true;
  } else {
    throw Refusal(uniform ? "neither decomposition condition holds"
                          : "demands are not uniform within clusters and the single-link condition fails");
  }

  const int k = clustering.k();
  for (int j = 0; j < k; ++j) {
    const std::vector<int> links = clustering.members(j);
    std::vector<double> demands;
    std::vector<double> lengths;
    for (int link : links) {
      demands.push_back(instance.demands[link]);
      lengths.push_back(instance.lengths[link]);
    }
    const Instance sub = Instance::create(demands, lengths, instance.power_w, instance.noise_w,
                                          instance.alpha);
    const Clustering sub_clustering(sub.lengths, std::vector<int>(links.size(), 0), 1);
    const RateTable sub_table = RateTable::from_function(
        {static_cast<int>(links.size())}, [&](int, const Profile& g) {
          Profile full{std::vector<int>(k, 0)};
          full.counts[j] = g.counts[0];
          return table.rate(j, full);
        });
    const ColgenResult res = colgen_solve(sub, sub_table, sub_clustering, options);
    out.cluster_totals.push_back(res.schedule.total);
    for (const auto& e : res.schedule.entries) {
      std::vector<int> members;
      for (int local : e.group.members()) members.push_back(links[sub.original_index[local]]);
      // rates follow members in ascending order, which the remap preserves
      out.schedule.entries.push_back({Group(std::move(members)), e.duration, e.rates});
    }
    out.schedule.total += res.schedule.total;
  }
  return out;
}

}  // namespace mtsp
