#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mtsp {

/// Partition of links into K non-empty clusters by link length.
class Clustering {
 public:
  /// Computes sizes, means, ranges and WCSS from an assignment. Throws
  /// std::invalid_argument if a cluster is empty or an index is out of range.
  Clustering(std::span<const double> lengths, std::vector<int> assignment, int k);

  int k() const { return k_; }
  std::size_t n_points() const { return assignment_.size(); }
  const std::vector<int>& assignment() const { return assignment_; }
  int cluster_of(int link) const { return assignment_[link]; }
  const std::vector<int>& sizes() const { return sizes_; }
  const std::vector<double>& mu() const { return mu_; }
  const std::vector<double>& len_min() const { return len_min_; }
  const std::vector<double>& len_max() const { return len_max_; }
  double wcss() const { return wcss_; }

  /// Links of cluster j, ascending index.
  std::vector<int> members(int cluster) const;

 private:
  int k_;
  std::vector<int> assignment_;
  std::vector<int> sizes_;
  std::vector<double> mu_;
  std::vector<double> len_min_;
  std::vector<double> len_max_;
  double wcss_ = 0.0;
};

struct ClusterRadii {
  std::vector<double> mu;
  std::vector<double> len_min;
  std::vector<double> len_max;
};

ClusterRadii cluster_radii(const Clustering& clustering);

/// Sum of squared deviations from cluster means; empty clusters contribute 0.
double wcss_of(std::span<const double> lengths, std::span<const int> assignment, int k);

struct LloydRun {
  Clustering clustering;
  double initial_wcss;              // WCSS of the assignment Lloyd started from
  std::vector<double> wcss_trace;   // after each iteration
  int iterations;
};

/// Lloyd iterations from a given assignment (clusters may start empty) until
/// the assignment stops changing. Empty clusters are reseeded with the point
/// farthest from its own cluster mean. Throws mtsp::SolverStall after
/// `max_iterations`.
LloydRun lloyd(std::span<const double> lengths, std::vector<int> assignment, int k,
               int max_iterations = 1000);

/// Moves each boundary between clusters that are adjacent in sorted order to
/// the position minimizing their combined WCSS, until no boundary moves.
/// Leaves non-contiguous assignments unchanged. Never increases WCSS.
std::vector<int> polish_boundaries(std::span<const double> lengths, std::vector<int> assignment,
                                   int k);

/// One-dimensional k-means: random initial assignment, Lloyd refinement
/// alternated with boundary polishing, best WCSS over `restarts`. Clusters
/// are relabelled by ascending mean.
Clustering kmeans(std::span<const double> lengths, int k, std::uint64_t seed, int restarts = 10);

}  // namespace mtsp
