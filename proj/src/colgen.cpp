#include "mtsp/colgen.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include "mtsp/errors.hpp"

namespace mtsp {

PricingResult price(std::span<const double> duals, const RateTable& table,
                    const Clustering& clustering) {
  return price(duals, table, clustering, std::vector<bool>(duals.size(), true));
}

PricingResult price(std::span<const double> duals, const RateTable& table,
                    const Clustering& clustering, const std::vector<bool>& eligible) {
  const std::size_t n = clustering.n_points();
  if (duals.size() != n || eligible.size() != n) {
    throw std::invalid_argument("dual vector length differs from link count");
  }
  const int k = clustering.k();
  if (table.cluster_count() != k) throw std::invalid_argument("table and clustering disagree on K");

  // per cluster: eligible links by descending dual, then prefix sums
  std::vector<std::vector<int>> ranked(k);
  for (std::size_t i = 0; i < n; ++i) {
    if (eligible[i]) ranked[clustering.cluster_of(static_cast<int>(i))].push_back(static_cast<int>(i));
  }
  std::vector<std::vector<double>> prefix(k);
  for (int j = 0; j < k; ++j) {
    auto& links = ranked[j];
    std::stable_sort(links.begin(), links.end(),
                     [&](int a, int b) { return duals[a] > duals[b]; });
    prefix[j].assign(links.size() + 1, 0.0);
    for (std::size_t p = 0; p < links.size(); ++p) prefix[j][p + 1] = prefix[j][p] + duals[links[p]];
  }

  std::size_t best_index = 0;
  double best = std::numeric_limits<double>::infinity();
  table.for_each_profile([&](std::size_t index, std::span<const int> counts) {
    double gain = 0.0;
    for (int j = 0; j < k; ++j) {
      if (counts[j] > static_cast<int>(ranked[j].size())) return;
      if (counts[j] > 0) gain += table.rate_at(index, j) * prefix[j][counts[j]];
    }
    const double rc = 1.0 - gain;
    if (rc < best) {
      best = rc;
      best_index = index;
    }
  });
  if (best_index == 0) throw std::invalid_argument("no eligible link to price");

  PricingResult out;
  out.profile = table.profile_at(best_index);
  out.reduced_cost = best;
  std::vector<int> members;
  for (int j = 0; j < k; ++j) {
    members.insert(members.end(), ranked[j].begin(), ranked[j].begin() + out.profile.counts[j]);
  }
  out.group = Group(std::move(members));
  return out;
}

ColgenResult colgen_solve(const Instance& instance, const RateTable& table,
                          const Clustering& clustering, const ColgenOptions& options) {
  if (!(options.eps > 0.0)) throw std::invalid_argument("colgen tolerance must be positive");
  if (clustering.n_points() != instance.n_links()) {
    throw std::invalid_argument("clustering does not cover the instance's links");
  }
  ColgenResult out;
  const std::size_t n = instance.n_links();
  const std::vector<int> rows = instance.active_links();
  if (rows.empty()) return out;

  const std::size_t m = rows.size();
  std::vector<int> row_of(n, -1);
  std::vector<bool> eligible(n, false);
  for (std::size_t r = 0; r < m; ++r) {
    row_of[rows[r]] = static_cast<int>(r);
    eligible[rows[r]] = true;
  }

  LpProblem master(m, 0);
  for (std::size_t r = 0; r < m; ++r) master.b()[r] = instance.demands[rows[r]];
  std::vector<Group> groups;
  std::set<Group> known;
  std::vector<double> column(m);

  auto add_group = [&](const Group& g) {
    const std::size_t index = table.index_of(profile_of(g, clustering));
    std::fill(column.begin(), column.end(), 0.0);
    for (int link : g.members()) column[row_of[link]] = table.rate_at(index, clustering.cluster_of(link));
    master.add_column(column, 1.0);
    groups.push_back(g);
    known.insert(g);
  };
  for (int link : rows) add_group(Group({link}));

  LpOptions lp_opts = options.lp;
  // master optimality must be tighter than the pricing threshold, otherwise an
  // existing column can be repriced as improving
  lp_opts.optimality_tol = std::min(lp_opts.optimality_tol, options.eps * 0.1);

  std::size_t profile_radix = table.profile_count() + 1;
  const int max_iterations = static_cast<int>(10 * profile_radix);
  std::vector<std::size_t> basis;
  LpSolution sol;
  std::vector<double> duals(n, 0.0);
  while (true) {
    if (out.iterations >= max_iterations) {
      throw SolverStall("column generation exceeded its iteration cap");
    }
    sol = warm_solve(master, basis, lp_opts);
    ++out.iterations;
    if (sol.status != LpStatus::kOptimal) {
      throw std::runtime_error(std::string("master LP ended ") + to_string(sol.status));
    }
    basis = sol.basis;
    out.objective_history.push_back(sol.objective);

    std::fill(duals.begin(), duals.end(), 0.0);
    for (std::size_t r = 0; r < m; ++r) duals[rows[r]] = sol.duals[r];
    PricingResult pr = price(duals, table, clustering, eligible);
    out.final_reduced_cost = pr.reduced_cost;
    if (pr.reduced_cost >= -options.eps) break;

    if (known.contains(pr.group)) {
      if (lp_opts.force_bland) throw SolverStall("pricing keeps returning a master column");
      lp_opts.force_bland = true;
      out.bland_fallback = true;
      basis.clear();
      continue;
    }
    out.added_reduced_costs.push_back(pr.reduced_cost);
    add_group(pr.group);
  }

  out.duals = duals;
  out.columns = groups.size();
  for (std::size_t j = 0; j < groups.size(); ++j) {
    const double t = sol.x[j];
    if (t <= 0.0) continue;
    std::vector<double> r;
    for (int link : groups[j].members()) r.push_back(master.a(row_of[link], j));
    out.schedule.entries.push_back({groups[j], t, std::move(r)});
    out.schedule.total += t;
  }
  return out;
}

}  // namespace mtsp
