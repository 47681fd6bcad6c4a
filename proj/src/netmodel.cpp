#include "mtsp/netmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "mtsp/clustering.hpp"

namespace mtsp {

namespace {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

constexpr int kCompensateAbove = 8;

}  // namespace

// ---------------------------------------------------------------------------
// Instance

Instance Instance::create(std::vector<double> demands, std::vector<double> lengths,
                          double power_w, double noise_w, double alpha) {
  if (demands.empty()) throw std::domain_error("instance needs at least one link");
  if (demands.size() != lengths.size()) {
    throw std::invalid_argument("demands and lengths differ in size");
  }
  if (!(power_w > 0.0) || !(noise_w > 0.0) || !(alpha > 0.0)) {
    throw std::domain_error("power, noise and alpha must be positive");
  }
  for (std::size_t i = 0; i < demands.size(); ++i) {
    if (!std::isfinite(demands[i]) || demands[i] < 0.0) {
      throw std::domain_error("demands must be finite and non-negative");
    }
    if (!std::isfinite(lengths[i]) || !(lengths[i] > 0.0)) {
      throw std::domain_error("link lengths must be finite and positive");
    }
  }

  std::vector<std::size_t> order(demands.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return demands[a] > demands[b]; });

  Instance out;
  out.power_w = power_w;
  out.noise_w = noise_w;
  out.alpha = alpha;
  out.original_index = order;
  out.demands.reserve(order.size());
  out.lengths.reserve(order.size());
  for (std::size_t i : order) {
    out.demands.push_back(demands[i]);
    out.lengths.push_back(lengths[i]);
  }
  return out;
}

std::vector<int> Instance::active_links() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < demands.size(); ++i) {
    if (demands[i] > 0.0) out.push_back(static_cast<int>(i));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Group / Profile

Group::Group(std::vector<int> members) : members_(std::move(members)) {
  if (members_.empty()) throw std::invalid_argument("group must be non-empty");
  std::sort(members_.begin(), members_.end());
  if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
    throw std::invalid_argument("group has duplicate links");
  }
  if (members_.front() < 0) throw std::invalid_argument("negative link index");
}

Group Group::from_mask(std::uint64_t mask) {
  std::vector<int> members;
  for (int i = 0; mask != 0; ++i, mask >>= 1) {
    if (mask & 1U) members.push_back(i);
  }
  return Group(std::move(members));
}

bool Group::contains(int link) const { return position_of(link) >= 0; }

int Group::position_of(int link) const {
  auto it = std::lower_bound(members_.begin(), members_.end(), link);
  if (it == members_.end() || *it != link) return -1;
  return static_cast<int>(it - members_.begin());
}

int Profile::total() const { return std::accumulate(counts.begin(), counts.end(), 0); }

std::string to_string(RateVariant variant) {
  switch (variant) {
    case RateVariant::kMean: return "mean";
    case RateVariant::kLower: return "lower";
    case RateVariant::kUpper: return "upper";
  }
  return "?";
}

RateVariant parse_rate_variant(const std::string& name) {
  if (name == "mean") return RateVariant::kMean;
  if (name == "lower") return RateVariant::kLower;
  if (name == "upper") return RateVariant::kUpper;
  throw std::invalid_argument("unknown rate variant: " + name);
}

// ---------------------------------------------------------------------------
// RateTable

RateTable RateTable::from_function(std::vector<int> sizes, const RateFn& fn,
                                   std::vector<double> cluster_gains) {
  if (sizes.empty()) throw std::invalid_argument("rate table needs at least one cluster");
  for (int n : sizes) {
    if (n <= 0) throw std::invalid_argument("empty cluster in rate table");
  }
  if (!cluster_gains.empty() && cluster_gains.size() != sizes.size()) {
    throw std::invalid_argument("cluster gain count differs from cluster count");
  }

  RateTable t;
  const std::size_t k = sizes.size();
  t.sizes_ = std::move(sizes);
  t.gains_ = std::move(cluster_gains);
  t.strides_.assign(k, 1);
  for (std::size_t j = k; j-- > 0;) {
    t.strides_[j] = t.radix_total_;
    t.radix_total_ *= static_cast<std::size_t>(t.sizes_[j] + 1);
  }
  t.rates_.assign(t.radix_total_ * k, 0.0);

  t.for_each_profile([&](std::size_t index, std::span<const int> counts) {
    Profile p{std::vector<int>(counts.begin(), counts.end())};
    for (std::size_t j = 0; j < k; ++j) {
      if (counts[j] == 0) continue;
      const double r = fn(static_cast<int>(j), p);
      if (!std::isfinite(r) || !(r > 0.0)) {
        throw std::invalid_argument("rate table entries must be positive and finite");
      }
      t.rates_[index * k + j] = r;
    }
  });
  t.check_monotone();
  return t;
}

void RateTable::check_monotone() const {
  const std::size_t k = sizes_.size();
  for_each_profile([&](std::size_t index, std::span<const int> counts) {
    for (std::size_t m = 0; m < k; ++m) {
      if (counts[m] == sizes_[m]) continue;
      const std::size_t bigger = index + strides_[m];
      for (std::size_t j = 0; j < k; ++j) {
        if (counts[j] == 0) continue;
        const double before = rates_[index * k + j];
        const double after = rates_[bigger * k + j];
        if (after > before * (1.0 + 1e-12)) {
          throw std::invalid_argument("rate table violates rate monotonicity");
        }
      }
    }
  });
}

std::size_t RateTable::index_of(const Profile& profile) const {
  if (profile.counts.size() != sizes_.size()) {
    throw std::invalid_argument("profile length differs from cluster count");
  }
  std::size_t index = 0;
  for (std::size_t j = 0; j < sizes_.size(); ++j) {
    const int g = profile.counts[j];
    if (g < 0 || g > sizes_[j]) throw std::invalid_argument("profile count out of range");
    index += static_cast<std::size_t>(g) * strides_[j];
  }
  if (index == 0) throw std::invalid_argument("empty profile");
  return index;
}

Profile RateTable::profile_at(std::size_t index) const {
  Profile p{std::vector<int>(sizes_.size())};
  for (std::size_t j = 0; j < sizes_.size(); ++j) {
    p.counts[j] = static_cast<int>(index / strides_[j]);
    index %= strides_[j];
  }
  return p;
}

double RateTable::rate(int cluster, const Profile& profile) const {
  if (cluster < 0 || cluster >= cluster_count()) throw std::out_of_range("cluster index");
  if (profile.counts.at(cluster) == 0) {
    throw std::invalid_argument("rate queried for a cluster absent from the profile");
  }
  return rate_at(index_of(profile), cluster);
}

void RateTable::for_each_profile(
    const std::function<void(std::size_t, std::span<const int>)>& fn) const {
  std::vector<int> counts(sizes_.size(), 0);
  for (std::size_t index = 1; index < radix_total_; ++index) {
    // odometer increment, last cluster fastest
    for (std::size_t j = sizes_.size(); j-- > 0;) {
      if (counts[j] < sizes_[j]) {
        ++counts[j];
        break;
      }
      counts[j] = 0;
    }
    fn(index, counts);
  }
}

// ---------------------------------------------------------------------------
// Physical model

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

double channel_gain(double length_m, double alpha, double power_w) {
  if (!(length_m > 0.0)) throw std::domain_error("link length must be positive");
  if (!(power_w > 0.0)) throw std::domain_error("transmit power must be positive");
  return power_w * std::pow(length_m, -alpha);
}

double shannon_rate(double sinr) {
  if (sinr < 0.0 || std::isnan(sinr)) throw std::domain_error("SINR must be non-negative");
  return std::log2(1.0 + sinr);
}

double true_link_rate(const Instance& instance, const Group& group, int link) {
  if (!group.contains(link)) throw std::invalid_argument("link is not a member of the group");
  const auto& members = group.members();
  if (members.back() >= static_cast<int>(instance.n_links())) {
    throw std::out_of_range("group references a link outside the instance");
  }
  const double signal = channel_gain(instance.lengths[link], instance.alpha, instance.power_w);
  double interference = 0.0;
  if (members.size() > static_cast<std::size_t>(kCompensateAbove)) {
    CompensatedSum sum;
    for (int k : members) {
      if (k != link) sum.add(channel_gain(instance.lengths[k], instance.alpha, instance.power_w));
    }
    interference = sum.value();
  } else {
    for (int k : members) {
      if (k != link) interference += channel_gain(instance.lengths[k], instance.alpha, instance.power_w);
    }
  }
  return shannon_rate(signal / (instance.noise_w + interference));
}

RateTable build_rate_table(const Instance& instance, const Clustering& clustering,
                           RateVariant variant) {
  if (clustering.n_points() != instance.n_links()) {
    throw std::invalid_argument("clustering does not cover the instance's links");
  }
  const int k = clustering.k();
  std::vector<double> signal(k);
  std::vector<double> interferer(k);
  for (int j = 0; j < k; ++j) {
    if (clustering.sizes()[j] == 0) throw std::invalid_argument("empty cluster");
    double signal_len = clustering.mu()[j];
    double interferer_len = clustering.mu()[j];
    if (variant == RateVariant::kUpper) {
      signal_len = clustering.len_min()[j];
      interferer_len = clustering.len_max()[j];
    } else if (variant == RateVariant::kLower) {
      signal_len = clustering.len_max()[j];
      interferer_len = clustering.len_min()[j];
    }
    signal[j] = channel_gain(signal_len, instance.alpha, instance.power_w);
    interferer[j] = channel_gain(interferer_len, instance.alpha, instance.power_w);
  }

  const double noise = instance.noise_w;
  auto fn = [&](int j, const Profile& g) {
    // the signal link itself is removed from its own cluster's count
    double interference = 0.0;
    if (k > kCompensateAbove) {
      CompensatedSum sum;
      for (int m = 0; m < k; ++m) sum.add((g.counts[m] - (m == j ? 1 : 0)) * interferer[m]);
      interference = sum.value();
    } else {
      for (int m = 0; m < k; ++m) interference += (g.counts[m] - (m == j ? 1 : 0)) * interferer[m];
    }
    return shannon_rate(signal[j] / (noise + interference));
  };
  return RateTable::from_function(clustering.sizes(), fn, signal);
}

Profile profile_of(const Group& group, const Clustering& clustering) {
  Profile p{std::vector<int>(clustering.k(), 0)};
  for (int link : group.members()) {
    if (link >= static_cast<int>(clustering.n_points())) {
      throw std::out_of_range("group references a link outside the clustering");
    }
    ++p.counts[clustering.cluster_of(link)];
  }
  return p;
}

Instance generate_instance(std::uint64_t seed, std::size_t n_links, double demand_lo,
                           double demand_hi) {
  if (n_links == 0) throw std::domain_error("instance needs at least one link");
  if (!(demand_lo > 0.0) || demand_lo > demand_hi) {
    throw std::domain_error("demand range must satisfy 0 < lo <= hi");
  }
  constexpr double kMinLength = 3.0;
  constexpr double kMaxLength = 250.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> length_dist(kMinLength, kMaxLength);
  std::uniform_real_distribution<double> demand_dist(demand_lo, demand_hi);
  std::vector<double> lengths(n_links);
  std::vector<double> demands(n_links);
  for (std::size_t i = 0; i < n_links; ++i) {
    lengths[i] = length_dist(rng);
    demands[i] = demand_dist(rng);
  }
  return Instance::create(std::move(demands), std::move(lengths), dbm_to_watts(30.0),
                          dbm_to_watts(-100.0), 4.0);
}

// ---------------------------------------------------------------------------
// Rate sources

std::vector<double> TrueRates::group_rates(const Group& group) const {
  std::vector<double> out;
  out.reserve(group.size());
  for (int link : group.members()) out.push_back(true_link_rate(*instance_, group, link));
  return out;
}

std::vector<double> TableRates::group_rates(const Group& group) const {
  const Profile p = profile_of(group, *clustering_);
  const std::size_t index = table_->index_of(p);
  std::vector<double> out;
  out.reserve(group.size());
  for (int link : group.members()) out.push_back(table_->rate_at(index, clustering_->cluster_of(link)));
  return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

double round_dbm(double dbm) { return std::round(dbm * 1e9) / 1e9; }

}  // namespace

std::string instance_to_json(const Instance& instance) {
  nlohmann::ordered_json doc;
  doc["n"] = instance.n_links();
  doc["demands_bits"] = instance.demands;
  doc["lengths_m"] = instance.lengths;
  doc["power_dbm"] = round_dbm(watts_to_dbm(instance.power_w));
  doc["noise_dbm"] = round_dbm(watts_to_dbm(instance.noise_w));
  doc["alpha"] = instance.alpha;
  return doc.dump(2) + "\n";
}

Instance instance_from_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  auto demands = doc.at("demands_bits").get<std::vector<double>>();
  auto lengths = doc.at("lengths_m").get<std::vector<double>>();
  const auto n = doc.at("n").get<std::size_t>();
  if (demands.size() != n || lengths.size() != n) {
    throw std::invalid_argument("instance field 'n' does not match list lengths");
  }
  return Instance::create(std::move(demands), std::move(lengths),
                          dbm_to_watts(doc.value("power_dbm", 30.0)),
                          dbm_to_watts(doc.value("noise_dbm", -100.0)), doc.value("alpha", 4.0));
}

}  // namespace mtsp
