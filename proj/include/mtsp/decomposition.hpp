#pragma once

#include <vector>

#include "mtsp/clustering.hpp"
#include "mtsp/colgen.hpp"
#include "mtsp/netmodel.hpp"
#include "mtsp/schedule.hpp"

namespace mtsp {

struct DecompositionReport {
  bool condition_t2 = false;            // some intra group per cluster beats every inter group
  bool condition_t3 = false;            // every solo link beats every inter group
  std::vector<int> witness_counts;      // per cluster, best intra-cluster cardinality
  std::vector<double> best_intra_sum_rate;
  double max_inter_sum_rate = 0.0;      // 0 when K = 1
  std::size_t profiles_checked = 0;
};

/// sum_j g_j * r^j_g
double sum_rate(const Profile& profile, const RateTable& table);

DecompositionReport check_theorem2(const RateTable& table);
DecompositionReport check_theorem3(const RateTable& table);

/// Both conditions in one pass over the profiles.
DecompositionReport analyze_decomposition(const RateTable& table);

/// True when every cluster's demands agree to within 1e-12 relative.
bool uniform_cluster_demands(const Instance& instance, const Clustering& clustering);

struct DecomposedResult {
  Schedule schedule;
  std::vector<double> cluster_totals;
  bool used_t3 = false;
};

/// Solves each cluster on its own (intra-cluster profiles only) and
/// concatenates. Throws mtsp::Refusal unless check_theorem3 holds, or
/// check_theorem2 holds and demands are uniform within clusters.
DecomposedResult decomposed_solve(const Instance& instance, const RateTable& table,
                                  const Clustering& clustering, const ColgenOptions& options = {});

}  // namespace mtsp
