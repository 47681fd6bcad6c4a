#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace mtsp {

class Clustering;

/// Problem instance: N links with demands sorted descending.
///
/// Link indices are 0-based throughout the library. `original_index[i]`
/// gives the position link i had in the caller's input before sorting.
struct Instance {
  std::vector<double> demands;   // bits, non-increasing
  std::vector<double> lengths;   // meters, > 0
  double power_w = 1.0;
  double noise_w = 1e-13;
  double alpha = 4.0;
  std::vector<std::size_t> original_index;

  std::size_t n_links() const { return demands.size(); }

  /// Sorts by demand (descending, stable) and validates every invariant.
  static Instance create(std::vector<double> demands, std::vector<double> lengths,
                         double power_w, double noise_w, double alpha);

  /// Indices of links with strictly positive demand, ascending.
  std::vector<int> active_links() const;
};

/// Non-empty set of link indices, kept sorted without duplicates.
class Group {
 public:
  Group() = default;
  explicit Group(std::vector<int> members);

  static Group from_mask(std::uint64_t mask);

  const std::vector<int>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool contains(int link) const;
  /// Position of `link` in members(), or -1.
  int position_of(int link) const;

  bool operator==(const Group&) const = default;
  auto operator<=>(const Group&) const = default;

 private:
  std::vector<int> members_;
};

/// Per-cluster activation counts of a group.
struct Profile {
  std::vector<int> counts;

  int total() const;
  bool operator==(const Profile&) const = default;
  auto operator<=>(const Profile&) const = default;
};

enum class RateVariant { kMean, kLower, kUpper };

std::string to_string(RateVariant variant);
RateVariant parse_rate_variant(const std::string& name);

/// MCCR rate lookup r^j_g for every profile g of a clustered network.
///
/// Profiles are addressed by a mixed-radix index whose most significant
/// digit is cluster 0, so increasing index order is lexicographic order.
/// Index 0 is the empty profile and carries no rates.
class RateTable {
 public:
  using RateFn = std::function<double(int cluster, const Profile& profile)>;

  /// Builds a table by evaluating `fn` at every (cluster, profile) pair with
  /// a non-zero count for that cluster. Throws std::invalid_argument when a
  /// rate is non-positive or the table violates rate monotonicity.
  static RateTable from_function(std::vector<int> sizes, const RateFn& fn,
                                 std::vector<double> cluster_gains = {});

  int cluster_count() const { return static_cast<int>(sizes_.size()); }
  const std::vector<int>& cluster_sizes() const { return sizes_; }
  const std::vector<double>& cluster_gains() const { return gains_; }

  /// Number of non-empty profiles, prod(n_j + 1) - 1.
  std::size_t profile_count() const { return radix_total_ - 1; }

  std::size_t index_of(const Profile& profile) const;
  Profile profile_at(std::size_t index) const;

  double rate(int cluster, const Profile& profile) const;
  double rate_at(std::size_t index, int cluster) const { return rates_[index * sizes_.size() + cluster]; }

  /// Calls fn(index, counts) for every non-empty profile in lexicographic order.
  void for_each_profile(const std::function<void(std::size_t, std::span<const int>)>& fn) const;

 private:
  RateTable() = default;
  void check_monotone() const;

  std::vector<int> sizes_;
  std::vector<std::size_t> strides_;
  std::size_t radix_total_ = 1;
  std::vector<double> gains_;
  std::vector<double> rates_;
};

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

/// Received power over a link of the given length: power_w * length^-alpha.
double channel_gain(double length_m, double alpha, double power_w);

/// log2(1 + sinr) at unit bandwidth.
double shannon_rate(double sinr);

/// Rate of `link` when `group` is active. Receivers sit at a common center,
/// so interference from transmitter k equals its own received power.
double true_link_rate(const Instance& instance, const Group& group, int link);

RateTable build_rate_table(const Instance& instance, const Clustering& clustering,
                           RateVariant variant);

Profile profile_of(const Group& group, const Clustering& clustering);

Instance generate_instance(std::uint64_t seed, std::size_t n_links, double demand_lo,
                           double demand_hi);

/// Per-member rates of a group. Implementations must be safe to call
/// concurrently.
class RateSource {
 public:
  virtual ~RateSource() = default;
  virtual std::vector<double> group_rates(const Group& group) const = 0;
};

/// SINR/Shannon rates computed from the instance geometry.
class TrueRates final : public RateSource {
 public:
  explicit TrueRates(const Instance& instance) : instance_(&instance) {}
  std::vector<double> group_rates(const Group& group) const override;

 private:
  const Instance* instance_;
};

/// Rates looked up in an MCCR table via the group's profile.
class TableRates final : public RateSource {
 public:
  TableRates(const RateTable& table, const Clustering& clustering)
      : table_(&table), clustering_(&clustering) {}
  std::vector<double> group_rates(const Group& group) const override;

 private:
  const RateTable* table_;
  const Clustering* clustering_;
};

// Instance JSON: {"n", "demands_bits", "lengths_m", "power_dbm", "noise_dbm", "alpha"}
std::string instance_to_json(const Instance& instance);
Instance instance_from_json(const std::string& text);

}  // namespace mtsp
