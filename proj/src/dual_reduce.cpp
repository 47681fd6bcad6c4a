#include "mtsp/dual_reduce.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mtsp {

ReducedDual build_reduced_dual(const Instance& instance, const RateTable& table,
                               const Clustering& clustering) {
  const std::size_t n = instance.n_links();
  if (clustering.n_points() != n) {
    throw std::invalid_argument("clustering does not cover the instance's links");
  }
  if (table.cluster_sizes() != clustering.sizes()) {
    throw std::invalid_argument("rate table and clustering disagree on cluster sizes");
  }
  const int k = clustering.k();

  // links of each cluster by descending demand; ties keep index order
  std::vector<std::vector<int>> ranked(k);
  for (int j = 0; j < k; ++j) {
    ranked[j] = clustering.members(j);
    std::stable_sort(ranked[j].begin(), ranked[j].end(), [&](int a, int b) {
      return instance.demands[a] > instance.demands[b];
    });
  }

  ReducedDual dual;
  dual.n_links = n;
  dual.objective = instance.demands;
  dual.profile_rows.reserve(table.profile_count());
  table.for_each_profile([&](std::size_t index, std::span<const int> counts) {
    ReducedDual::ProfileRow row;
    row.profile_index = index;
    for (int j = 0; j < k; ++j) {
      for (int p = 0; p < counts[j]; ++p) {
        row.links.push_back(ranked[j][p]);
        row.coefficients.push_back(table.rate_at(index, j));
      }
    }
    dual.profile_rows.push_back(std::move(row));
  });
  for (int j = 0; j < k; ++j) {
    for (std::size_t p = 0; p + 1 < ranked[j].size(); ++p) {
      dual.chain_rows.push_back({ranked[j][p], ranked[j][p + 1]});
    }
  }
  return dual;
}

double reduced_dual_violation(const ReducedDual& dual, std::span<const double> duals) {
  if (duals.size() != dual.n_links) throw std::invalid_argument("dual vector length mismatch");
  double worst = 0.0;
  for (const auto& row : dual.profile_rows) {
    double lhs = 0.0;
    for (std::size_t p = 0; p < row.links.size(); ++p) lhs += row.coefficients[p] * duals[row.links[p]];
    worst = std::max(worst, lhs - 1.0);
  }
  for (const auto& row : dual.chain_rows) worst = std::max(worst, duals[row.lower] - duals[row.higher]);
  for (double v : duals) worst = std::max(worst, -v);
  return worst;
}

ReducedDualSolution reduced_dual_solve(const Instance& instance, const RateTable& table,
                                       const Clustering& clustering, const LpOptions& options) {
  const ReducedDual dual = build_reduced_dual(instance, table, clustering);
  const std::size_t n = dual.n_links;
  const std::size_t n_prof = dual.profile_rows.size();
  const std::size_t n_chain = dual.chain_rows.size();
  const std::size_t m = n_prof + n_chain;

  // max d'pi  ->  min -d'pi over [pi | slack | surplus], all >= 0
  LpProblem lp(m, n + m);
  for (std::size_t i = 0; i < n; ++i) lp.c()[i] = -dual.objective[i];
  for (std::size_t r = 0; r < n_prof; ++r) {
    const auto& row = dual.profile_rows[r];
    for (std::size_t p = 0; p < row.links.size(); ++p) lp.a(r, row.links[p]) += row.coefficients[p];
    lp.a(r, n + r) = 1.0;
    lp.b()[r] = 1.0;
  }
  for (std::size_t c = 0; c < n_chain; ++c) {
    const std::size_t r = n_prof + c;
    lp.a(r, dual.chain_rows[c].higher) = 1.0;
    lp.a(r, dual.chain_rows[c].lower) = -1.0;
    lp.a(r, n + r) = -1.0;
  }

  // slack/surplus basis is feasible at pi = 0
  std::vector<std::size_t> start(m);
  std::iota(start.begin(), start.end(), n);
  const LpSolution sol = warm_solve(lp, start, options);
  if (sol.status != LpStatus::kOptimal) {
    throw std::runtime_error(std::string("reduced dual LP ended ") + to_string(sol.status));
  }

  ReducedDualSolution out;
  out.objective = -sol.objective;
  out.duals.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(n));
  out.lp_rows = m;
  out.lp_cols = n + m;
  out.iterations = sol.iterations;
  return out;
}

}  // namespace mtsp
