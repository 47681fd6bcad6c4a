#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mtsp/netmodel.hpp"

namespace mtsp {

struct ExperimentConfig {
  std::size_t n_links = 15;
  std::vector<int> k_values{1, 2, 3, 4, 5, 6};
  std::size_t n_instances = 100;
  double demand_lo = 100.0;
  double demand_hi = 1500.0;
  std::uint64_t seed = 0;      // instances use seed, seed + 1, ...
  bool run_oracle = true;      // only honoured while n_links fits the oracle
  int restarts = 10;
  int threads = 0;             // 0 selects hardware concurrency
  bool record_timing = true;   // false writes solve_ms = 0 for byte-identical reruns

  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
};

struct SweepRow {
  std::uint64_t seed = 0;
  int k = 0;
  std::size_t n = 0;
  double t_lower = 0.0;
  double t_upper = 0.0;
  double t_upper_improved = 0.0;
  double t_approx = 0.0;
  std::optional<double> t_star;
  double solve_ms = 0.0;

  /// t_star when the oracle ran, else t_lower.
  double denominator() const { return t_star ? *t_star : t_lower; }
  double norm_gap_bounds() const { return (t_upper - t_lower) / denominator(); }
  double norm_gap_improved() const { return (t_upper_improved - t_lower) / denominator(); }
  double norm_approx() const { return t_approx / denominator(); }
};

struct SweepSummary {
  int k = 0;
  std::size_t count = 0;
  double mean_t_lower = 0.0;
  double mean_t_upper = 0.0;
  double mean_t_upper_improved = 0.0;
  double mean_t_approx = 0.0;
  std::optional<double> mean_t_star;
  double mean_norm_gap_bounds = 0.0;
  double mean_norm_gap_improved = 0.0;
  double mean_norm_approx = 0.0;
  double mean_solve_ms = 0.0;
};

/// One row per (seed, k), sorted by (seed, k). Every row's bound sandwich is
/// checked before it is returned; a violation throws std::runtime_error.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config);

std::vector<SweepSummary> summarize(const std::vector<SweepRow>& rows);

/// Nine significant digits, the format every CSV float uses.
std::string format_double(double value);

inline constexpr const char* kSweepHeader =
    "seed,k,n,t_lower,t_upper,t_upper_improved,t_approx,t_star,norm_gap_bounds,"
    "norm_gap_improved,norm_approx,solve_ms";

/// Data rows followed by one "mean" row per k.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Empirical CDF of norm_approx per k: "k,norm_approx,cdf".
void write_approx_cdf_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Writes instance_<seed>.json for every seed of the config into `dir`.
std::vector<std::filesystem::path> generate_instances(const ExperimentConfig& config,
                                                      const std::filesystem::path& dir);

enum class SolveMethod { kOracle, kColgen, kDualReduce, kDecomposed };

SolveMethod parse_solve_method(const std::string& name);
std::string to_string(SolveMethod method);

struct SolveRequest {
  SolveMethod method = SolveMethod::kColgen;
  int k = 1;
  std::optional<RateVariant> variant = RateVariant::kMean;  // nullopt: true SINR rates (oracle only)
  std::uint64_t seed = 0;                                   // k-means seed
  int restarts = 10;
};

struct SolveReport {
  std::string method;
  std::string rates;
  int k = 0;
  double total = 0.0;
  bool has_schedule = false;
  std::vector<std::pair<std::vector<int>, double>> entries;  // members (input order), duration
  int iterations = 0;
  std::size_t columns = 0;
  bool certified = false;
  std::string note;
};

/// Runs one method; throws mtsp::Refusal with a reason when the method
/// cannot be applied to this instance.
SolveReport solve_instance(const Instance& instance, const SolveRequest& request);

std::string solve_report_json(const SolveReport& report);

struct BenchConfig {
  std::vector<std::size_t> n_values{6, 8, 10, 12, 14};
  int fixed_k = 2;
  std::size_t fixed_n = 12;
  std::vector<int> k_values{1, 2, 3, 4};
  std::size_t n_instances = 3;
  double demand_lo = 100.0;
  double demand_hi = 1500.0;
  std::uint64_t seed = 0;
};

struct BenchRow {
  std::string sweep;   // "n" or "k"
  std::size_t n = 0;
  int k = 0;
  std::uint64_t seed = 0;
  std::size_t profiles = 0;
  std::size_t reduced_dual_rows = 0;
  std::size_t colgen_columns = 0;
  double dual_reduce_ms = 0.0;
  double colgen_ms = 0.0;
  double rel_diff = 0.0;   // |T_dual - T_colgen| / T_colgen
};

inline constexpr const char* kBenchHeader =
    "sweep,n,k,seed,profiles,reduced_dual_rows,colgen_columns,dual_reduce_ms,colgen_ms,rel_diff";

std::vector<BenchRow> run_bench(const BenchConfig& config);
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace mtsp
