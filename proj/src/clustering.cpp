#include "mtsp/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "mtsp/errors.hpp"

namespace mtsp {

Clustering::Clustering(std::span<const double> lengths, std::vector<int> assignment, int k)
    : k_(k), assignment_(std::move(assignment)) {
  if (k <= 0) throw std::invalid_argument("cluster count must be positive");
  if (assignment_.size() != lengths.size()) {
    throw std::invalid_argument("assignment and lengths differ in size");
  }
  sizes_.assign(k, 0);
  mu_.assign(k, 0.0);
  len_min_.assign(k, std::numeric_limits<double>::infinity());
  len_max_.assign(k, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    const int j = assignment_[i];
    if (j < 0 || j >= k) throw std::invalid_argument("cluster index out of range");
    ++sizes_[j];
    mu_[j] += lengths[i];
    len_min_[j] = std::min(len_min_[j], lengths[i]);
    len_max_[j] = std::max(len_max_[j], lengths[i]);
  }
  for (int j = 0; j < k; ++j) {
    if (sizes_[j] == 0) throw std::invalid_argument("clustering has an empty cluster");
    mu_[j] /= sizes_[j];
    // rounding can push the mean a hair outside the range when all members agree
    mu_[j] = std::clamp(mu_[j], len_min_[j], len_max_[j]);
  }
  wcss_ = wcss_of(lengths, assignment_, k);
}

std::vector<int> Clustering::members(int cluster) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < assignment_.size(); ++i) {
    if (assignment_[i] == cluster) out.push_back(static_cast<int>(i));
  }
  return out;
}

ClusterRadii cluster_radii(const Clustering& clustering) {
  return {clustering.mu(), clustering.len_min(), clustering.len_max()};
}

namespace {

struct Moments {
  std::vector<double> mean;
  std::vector<int> count;
};

Moments moments(std::span<const double> lengths, std::span<const int> assignment, int k) {
  Moments m{std::vector<double>(k, 0.0), std::vector<int>(k, 0)};
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    m.mean[assignment[i]] += lengths[i];
    ++m.count[assignment[i]];
  }
  for (int j = 0; j < k; ++j) {
    if (m.count[j] > 0) m.mean[j] /= m.count[j];
  }
  return m;
}

// Moves the point farthest from its own cluster mean into each empty cluster.
void repair_empty(std::span<const double> lengths, std::vector<int>& assignment, int k) {
  for (int empty = 0; empty < k; ++empty) {
    Moments m = moments(lengths, assignment, k);
    if (m.count[empty] > 0) continue;
    int pick = -1;
    double best = -1.0;
    for (std::size_t i = 0; i < lengths.size(); ++i) {
      const int j = assignment[i];
      if (m.count[j] < 2) continue;
      const double dist = std::abs(lengths[i] - m.mean[j]);
      if (dist > best) {
        best = dist;
        pick = static_cast<int>(i);
      }
    }
    if (pick < 0) throw std::logic_error("no donor point for an empty cluster");
    assignment[pick] = empty;
  }
}

}  // namespace

double wcss_of(std::span<const double> lengths, std::span<const int> assignment, int k) {
  const Moments m = moments(lengths, assignment, k);
  double total = 0.0;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    const double d = lengths[i] - m.mean[assignment[i]];
    total += d * d;
  }
  return total;
}

LloydRun lloyd(std::span<const double> lengths, std::vector<int> assignment, int k,
               int max_iterations) {
  const std::size_t n = lengths.size();
  if (n == 0) throw std::invalid_argument("k-means needs at least one point");
  if (k < 1 || static_cast<std::size_t>(k) > n) {
    throw std::domain_error("cluster count must lie in 1..N");
  }
  if (assignment.size() != n) throw std::invalid_argument("assignment size mismatch");

  const double initial = wcss_of(lengths, assignment, k);
  repair_empty(lengths, assignment, k);

  std::vector<double> trace;
  for (int iter = 1; iter <= max_iterations; ++iter) {
    const Moments m = moments(lengths, assignment, k);
    std::vector<int> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_dist = std::numeric_limits<double>::infinity();
      for (int j = 0; j < k; ++j) {
        const double d = std::abs(lengths[i] - m.mean[j]);
        if (d < best_dist) {  // strict: ties stay with the lower index
          best_dist = d;
          best = j;
        }
      }
      next[i] = best;
    }
    repair_empty(lengths, next, k);
    trace.push_back(wcss_of(lengths, next, k));
    if (next == assignment) {
      return {Clustering(lengths, std::move(assignment), k), initial, std::move(trace), iter};
    }
    assignment = std::move(next);
  }
  throw SolverStall("Lloyd iterations did not settle within the cap");
}

std::vector<int> polish_boundaries(std::span<const double> lengths, std::vector<int> assignment,
                                   int k) {
  const std::size_t n = lengths.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return lengths[a] < lengths[b];
  });

  // cluster labels along sorted order must form k consecutive runs
  std::vector<int> run_label;
  std::vector<std::size_t> run_start;
  for (std::size_t p = 0; p < n; ++p) {
    const int label = assignment[order[p]];
    if (run_label.empty() || run_label.back() != label) {
      run_label.push_back(label);
      run_start.push_back(p);
    }
  }
  if (run_label.size() != static_cast<std::size_t>(k)) return assignment;
  run_start.push_back(n);

  std::vector<double> prefix(n + 1, 0.0), prefix_sq(n + 1, 0.0);
  for (std::size_t p = 0; p < n; ++p) {
    prefix[p + 1] = prefix[p] + lengths[order[p]];
    prefix_sq[p + 1] = prefix_sq[p] + lengths[order[p]] * lengths[order[p]];
  }
  auto ss = [&](std::size_t lo, std::size_t hi) {
    const double cnt = static_cast<double>(hi - lo);
    const double s = prefix[hi] - prefix[lo];
    return std::max(0.0, (prefix_sq[hi] - prefix_sq[lo]) - s * s / cnt);
  };
  auto direct_ss = [&](std::size_t lo, std::size_t hi) {
    double mean = 0.0;
    for (std::size_t p = lo; p < hi; ++p) mean += lengths[order[p]];
    mean /= static_cast<double>(hi - lo);
    double s = 0.0;
    for (std::size_t p = lo; p < hi; ++p) s += (lengths[order[p]] - mean) * (lengths[order[p]] - mean);
    return s;
  };

  bool moved = true;
  for (int sweep = 0; moved && sweep < 1000; ++sweep) {
    moved = false;
    for (int b = 1; b < k; ++b) {
      const std::size_t lo = run_start[b - 1];
      const std::size_t hi = run_start[b + 1];
      std::size_t best_cut = run_start[b];
      double best = direct_ss(lo, best_cut) + direct_ss(best_cut, hi);
      for (std::size_t cut = lo + 1; cut < hi; ++cut) {
        if (cut == run_start[b]) continue;
        // screen with prefix sums, confirm with a direct sum
        if (ss(lo, cut) + ss(cut, hi) >= best) continue;
        const double exact = direct_ss(lo, cut) + direct_ss(cut, hi);
        if (exact < best * (1.0 - 1e-12)) {
          best = exact;
          best_cut = cut;
        }
      }
      if (best_cut != run_start[b]) {
        run_start[b] = best_cut;
        moved = true;
      }
    }
  }
  for (int r = 0; r < k; ++r) {
    for (std::size_t p = run_start[r]; p < run_start[r + 1]; ++p) assignment[order[p]] = run_label[r];
  }
  return assignment;
}

Clustering kmeans(std::span<const double> lengths, int k, std::uint64_t seed, int restarts) {
  if (lengths.empty()) throw std::invalid_argument("k-means needs at least one point");
  if (k < 1 || static_cast<std::size_t>(k) > lengths.size()) {
    throw std::domain_error("cluster count must lie in 1..N");
  }
  restarts = std::max(restarts, 1);

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, k - 1);
  std::vector<int> best;
  double best_wcss = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    std::vector<int> init(lengths.size());
    for (int& a : init) a = pick(rng);
    LloydRun run = lloyd(lengths, std::move(init), k);
    for (int round = 0; round < 1000; ++round) {
      std::vector<int> polished = polish_boundaries(lengths, run.clustering.assignment(), k);
      if (polished == run.clustering.assignment()) break;
      run = lloyd(lengths, std::move(polished), k);
    }
    if (run.clustering.wcss() < best_wcss) {
      best_wcss = run.clustering.wcss();
      best = run.clustering.assignment();
    }
  }

  // relabel by ascending mean
  const Moments m = moments(lengths, best, k);
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return m.mean[a] < m.mean[b]; });
  std::vector<int> label(k);
  for (int j = 0; j < k; ++j) label[order[j]] = j;
  for (int& a : best) a = label[a];
  return Clustering(lengths, std::move(best), k);
}

}  // namespace mtsp
