// Acceptance suite. Usage: acceptance [criterion...]; runs 1-8 when no
// argument is given. Prints one PASS/FAIL line per criterion and exits
// non-zero if any selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "mtsp/bounds.hpp"
#include "mtsp/clustering.hpp"
#include "mtsp/colgen.hpp"
#include "mtsp/decomposition.hpp"
#include "mtsp/dual_reduce.hpp"
#include "mtsp/errors.hpp"
#include "mtsp/experiments.hpp"
#include "mtsp/lp_core.hpp"
#include "mtsp/oracle.hpp"
#include "support/oracles.hpp"

using namespace mtsp;
namespace t = mtsp::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string pct(double v) { return fmt(100.0 * v, 4) + "%"; }

// Instance whose demands are drawn per cluster assignment; the assignment is
// carried through the descending demand sort.
struct Mccr {
  Instance instance;
  Clustering clustering;
};

Mccr random_clustered(std::mt19937_64& rng, std::size_t n, int k, bool uniform_demand = false) {
  std::uniform_real_distribution<double> demand(100.0, 1500.0);
  std::uniform_real_distribution<double> length(3.0, 250.0);
  const auto assignment = t::random_assignment(n, k, rng);
  std::vector<double> per_cluster(k);
  for (double& v : per_cluster) v = demand(rng);
  std::vector<double> d(n), l(n);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = uniform_demand ? per_cluster[assignment[i]] : demand(rng);
    l[i] = length(rng);
  }
  Instance inst = t::make_instance(d, l);
  std::vector<int> sorted(n);
  for (std::size_t i = 0; i < n; ++i) sorted[i] = assignment[inst.original_index[i]];
  Clustering cl(inst.lengths, sorted, k);
  return {std::move(inst), std::move(cl)};
}

// 1. oracle, column generation and the reduced dual agree
Outcome criterion1() {
  std::mt19937_64 rng(1001);
  int failures = 0;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 4 + static_cast<std::size_t>(i % 9);  // 4..12
    const int k = 1 + i % 3;
    Instance inst = generate_instance(5000 + i, n, 100, 1500);
    Clustering cl = kmeans(inst.lengths, k, 5000 + i);
    RateTable table = build_rate_table(inst, cl, static_cast<RateVariant>(i / 2 % 3));
    if (i % 2 == 1) {
      Mccr m = random_clustered(rng, n, k);
      inst = std::move(m.instance);
      cl = std::move(m.clustering);
      table = t::synthetic_table(cl.sizes(), rng);
    }
    const double a = brute_force_solve(inst, TableRates(table, cl)).schedule.total;
    const double b = colgen_solve(inst, table, cl).schedule.total;
    const double c = reduced_dual_solve(inst, table, cl).objective;
    const double diff = std::max({std::abs(a - b), std::abs(a - c), std::abs(b - c)}) /
                        std::min({a, b, c});
    worst = std::max(worst, diff);
    if (diff > 1e-6) ++failures;
  }
  return {failures == 0, "50 instances, worst pairwise relative difference " + fmt(worst) +
                             " (limit 1e-6), " + std::to_string(failures) + " failures"};
}

// 2. lower bound <= optimum <= improved upper <= upper
Outcome criterion2() {
  int failures = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Instance inst = generate_instance(seed, 12, 100, 1500);
    const double t_star = brute_force_solve(inst, TrueRates(inst)).schedule.total;
    const int k = 1 + static_cast<int>(seed % 6);
    const BoundsReport r = compute_bounds(inst, kmeans(inst.lengths, k, seed), t_star);
    const double s = 1e-6 * t_star;
    const bool ok = r.t_lower <= t_star + s && t_star <= r.t_upper_improved + s &&
                    r.t_upper_improved <= r.t_upper + s;
    if (!ok) ++failures;
  }
  return {failures == 0, "100 instances at N = 12, " + std::to_string(failures) + " sandwich violations"};
}

std::vector<SweepRow> k_sweep() {
  ExperimentConfig cfg;
  cfg.n_links = 15;
  cfg.k_values = {1, 2, 3, 4, 5, 6};
  cfg.n_instances = 100;
  cfg.demand_lo = 100.0;
  cfg.demand_hi = 1500.0;
  cfg.seed = 0;
  cfg.record_timing = false;
  return run_sweep(cfg);
}

// 3. mean normalized bound gap shrinks with K and is small for K >= 4
Outcome criterion3() {
  const auto summary = summarize(k_sweep());
  bool pass = true;
  std::string detail = "mean (T_up - T_low)/T* by K:";
  for (std::size_t i = 0; i < summary.size(); ++i) {
    const double gap = summary[i].mean_norm_gap_bounds;
    detail += " " + std::to_string(summary[i].k) + ":" + pct(gap);
    if (i > 0 && gap > summary[i - 1].mean_norm_gap_bounds + 0.01) pass = false;
    if (summary[i].k >= 4 && gap > 0.12) pass = false;
  }
  return {pass, detail + " (non-increasing within 1pp; <= 12% for K >= 4)"};
}

// 4. the mean-radius approximation is within 3% of the optimum
Outcome criterion4() {
  std::map<int, int> within;
  for (const auto& r : k_sweep()) {
    if (r.k >= 3 && std::abs(r.t_approx - *r.t_star) / *r.t_star <= 0.03) ++within[r.k];
  }
  bool pass = true;
  std::string detail = "instances with |T_approx - T*|/T* <= 3% by K:";
  for (int k = 3; k <= 6; ++k) {
    detail += " " + std::to_string(k) + ":" + std::to_string(within[k]) + "/100";
    if (within[k] < 90) pass = false;
  }
  return {pass, detail + " (need >= 90)"};
}

// 5. medium networks: gaps against the lower bound
Outcome criterion5() {
  ExperimentConfig cfg;
  cfg.n_links = 30;
  cfg.k_values = {6};
  cfg.n_instances = 100;
  cfg.demand_lo = 100.0;
  cfg.demand_hi = 3000.0;
  cfg.seed = 0;
  cfg.run_oracle = false;
  cfg.record_timing = false;
  const auto rows = run_sweep(cfg);
  double gap = 0.0, improved = 0.0;
  int above = 0;
  for (const auto& r : rows) {
    gap += (r.t_upper - r.t_lower) / r.t_lower;
    improved += (r.t_upper_improved - r.t_lower) / r.t_lower;
    if (r.t_upper_improved > r.t_upper) ++above;
  }
  gap /= static_cast<double>(rows.size());
  improved /= static_cast<double>(rows.size());
  return {gap <= 0.11 && improved <= 0.07 && above == 0,
          "N = 30, K = 6: mean (T_up - T_low)/T_low " + pct(gap) + " (<= 11%), improved " +
              pct(improved) + " (<= 7%), improved above plain on " + std::to_string(above) +
              " instances"};
}

// 6. pricing returns the exhaustive optimum
Outcome criterion6() {
  std::mt19937_64 rng(606);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 10);
    const int k = 1 + trial % std::min(3, static_cast<int>(n));
    const Mccr m = random_clustered(rng, n, k);
    const RateTable table = trial % 2 == 0 ? t::synthetic_table(m.clustering.sizes(), rng)
                                           : build_rate_table(m.instance, m.clustering, RateVariant::kMean);
    std::vector<double> duals(n);
    std::uniform_real_distribution<double> u(0.0, 0.5);
    for (double& v : duals) v = u(rng);
    const auto got = price(duals, table, m.clustering);
    const auto expect = t::exhaustive_price(duals, table, m.clustering);
    if (got.profile != expect.profile ||
        std::abs(got.reduced_cost - expect.reduced_cost) > 1e-12 * std::max(1.0, std::abs(expect.reduced_cost))) {
      ++mismatches;
    }
  }
  return {mismatches == 0, "1000 dual vectors, " + std::to_string(mismatches) + " mismatches"};
}

// 7. decomposition is exact where it applies and recognizes counterexamples
Outcome criterion7() {
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> solo(1.0, 5.0);
  std::uniform_real_distribution<double> own(0.3, 1.0);
  int exact = 0, decomposable = 0, rejected = 0, counterexamples = 0;
  double worst = 0.0;
  while (decomposable < 20) {
    const std::size_t n = 3 + static_cast<std::size_t>(decomposable % 10);
    const int k = 2 + decomposable % 2;
    const bool uniform = decomposable % 2 == 0;
    const Mccr m = random_clustered(rng, n, k, uniform);
    std::vector<double> s(k);
    for (double& v : s) v = solo(rng);
    // uniform cases use moderate cross factors so the intra-group condition
    // is the one that matters
    const double cross = uniform ? std::uniform_real_distribution<double>(0.3, 0.7)(rng)
                                 : std::uniform_real_distribution<double>(1e-4, 0.2)(rng);
    const RateTable table = t::parametric_table(m.clustering.sizes(), s, own(rng), cross);
    const auto rep = analyze_decomposition(table);
    const bool applies = rep.condition_t3 || (rep.condition_t2 && uniform_cluster_demands(m.instance, m.clustering));
    if (!applies) continue;
    ++decomposable;
    const double got = decomposed_solve(m.instance, table, m.clustering).schedule.total;
    const double want = brute_force_solve(m.instance, TableRates(table, m.clustering)).schedule.total;
    const double diff = std::abs(got - want) / want;
    worst = std::max(worst, diff);
    if (diff <= 1e-6) ++exact;
  }
  while (counterexamples < 20) {
    const int k = 2 + counterexamples % 3;
    std::vector<int> sizes(k);
    for (int& v : sizes) v = 1 + static_cast<int>(rng() % 3);
    std::vector<double> s(k);
    for (double& v : s) v = solo(rng);
    // near-orthogonal clusters: mixing costs little, so mixed groups win
    const RateTable table =
        t::parametric_table(sizes, s, own(rng), std::uniform_real_distribution<double>(0.8, 1.0)(rng));
    ++counterexamples;
    if (!check_theorem2(table).condition_t2 && !check_theorem3(table).condition_t3) ++rejected;
  }
  return {exact == 20 && rejected == 20,
          std::to_string(exact) + "/20 decomposable instances exact (worst " + fmt(worst) + "), " +
              std::to_string(rejected) + "/20 counterexamples rejected"};
}

// 8. property suites
Outcome criterion8() {
  std::mt19937_64 rng(808);
  std::vector<std::string> broken;

  // rate monotonicity under true SINR rates
  for (std::uint64_t seed = 0; seed < 50 && broken.empty(); ++seed) {
    const Instance inst = generate_instance(seed, 12, 100, 1500);
    for (int trial = 0; trial < 50; ++trial) {
      const std::uint64_t small = 1 + rng() % 4095;
      const std::uint64_t big = small | (rng() % 4096);
      const Group gs = Group::from_mask(small), gb = Group::from_mask(big);
      for (int link : gs.members()) {
        if (true_link_rate(inst, gb, link) > true_link_rate(inst, gs, link) * (1 + 1e-12)) {
          broken.push_back("rate monotonicity");
          break;
        }
      }
    }
  }

  // Lloyd descent and 2-means global optimum
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 11);
    std::vector<double> x(n);
    std::uniform_real_distribution<double> u(3.0, 250.0);
    for (double& v : x) v = u(rng);
    const int k = 1 + trial % std::min<int>(4, static_cast<int>(n));
    std::vector<int> start(n);
    for (int& a : start) a = static_cast<int>(rng() % static_cast<unsigned>(k));
    const LloydRun run = lloyd(x, start, k);
    double prev = run.initial_wcss;
    for (double w : run.wcss_trace) {
      if (w > prev * (1 + 1e-12) + 1e-12) broken.push_back("WCSS descent");
      prev = w;
    }
    const Clustering two = kmeans(x, 2, static_cast<std::uint64_t>(trial));
    if (std::abs(two.wcss() - t::best_two_cluster_wcss(x)) > 1e-9 * std::max(1.0, two.wcss())) {
      broken.push_back("2-means global optimum");
    }
  }

  // simplex against vertex enumeration, and Beale's example
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const int m = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
    std::vector<std::vector<double>> a(m, std::vector<double>(n));
    for (auto& row : a) {
      for (double& v : row) v = static_cast<double>(static_cast<int>(rng() % 7) - 3);
    }
    if (t::matrix_rank(a) < m) continue;
    LpProblem lp(m, n);
    for (int j = 0; j < n; ++j) {
      const double x0 = static_cast<double>(rng() % 4);
      lp.c()[j] = static_cast<double>(rng() % 6);
      for (int i = 0; i < m; ++i) {
        lp.a(i, j) = a[i][j];
        lp.b()[i] += a[i][j] * x0;
      }
    }
    const auto expect = t::vertex_enumeration_min(lp);
    const LpSolution sol = solve(lp);
    if (!expect || sol.status != LpStatus::kOptimal ||
        std::abs(sol.objective - *expect) > 1e-8 * std::max(1.0, std::abs(*expect))) {
      broken.push_back("simplex vs vertex enumeration");
    }
  }
  {
    LpProblem beale(3, 7);
    const double rows[3][7] = {{1, 0, 0, 0.25, -8, -1, 9}, {0, 1, 0, 0.5, -12, -0.5, 3}, {0, 0, 1, 0, 0, 1, 0}};
    const double cost[7] = {0, 0, 0, -0.75, 20, -0.5, 6};
    for (int j = 0; j < 7; ++j) {
      beale.c()[j] = cost[j];
      for (int i = 0; i < 3; ++i) beale.a(i, j) = rows[i][j];
    }
    beale.b() = {0, 0, 1};
    const LpSolution sol = warm_solve(beale, std::vector<std::size_t>{0, 1, 2});
    if (sol.status != LpStatus::kOptimal || std::abs(sol.objective + 1.25) > 1e-9) broken.push_back("Beale");
  }

  // column generation master never rises
  for (int trial = 0; trial < 30; ++trial) {
    const Mccr m = random_clustered(rng, 6 + static_cast<std::size_t>(trial % 7), 1 + trial % 3);
    const RateTable table = t::synthetic_table(m.clustering.sizes(), rng);
    const ColgenResult res = colgen_solve(m.instance, table, m.clustering);
    for (std::size_t i = 1; i < res.objective_history.size(); ++i) {
      if (res.objective_history[i] > res.objective_history[i - 1] * (1 + 1e-12)) {
        broken.push_back("colgen master descent");
      }
    }
  }

  if (broken.empty()) {
    return {true, "rate monotonicity, WCSS descent, 2-means optimum, simplex vs vertex enumeration, "
                  "Beale, colgen master descent"};
  }
  std::sort(broken.begin(), broken.end());
  broken.erase(std::unique(broken.begin(), broken.end()), broken.end());
  std::string detail = "broken:";
  for (const auto& b : broken) detail += " [" + b + "]";
  return {false, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::function<Outcome()>> criteria{
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},
      {5, criterion5}, {6, criterion6}, {7, criterion7}, {8, criterion8}};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty()) {
    for (const auto& [id, fn] : criteria) selected.push_back(id);
  }
  int failed = 0;
  for (int id : selected) {
    const auto it = criteria.find(id);
    if (it == criteria.end()) {
      std::fprintf(stderr, "unknown criterion %d\n", id);
      return 2;
    }
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = it->second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d %s: %s [%.1f s]\n", id, out.pass ? "PASS" : "FAIL", out.detail.c_str(), secs);
    if (!out.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
