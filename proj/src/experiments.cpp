#include "mtsp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "mtsp/bounds.hpp"
#include "mtsp/clustering.hpp"
#include "mtsp/colgen.hpp"
#include "mtsp/decomposition.hpp"
#include "mtsp/dual_reduce.hpp"
#include "mtsp/errors.hpp"
#include "mtsp/oracle.hpp"

namespace mtsp {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1U, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n_links == 0) throw std::invalid_argument("n_links must be positive");
  if (n_instances == 0) throw std::invalid_argument("n_instances must be at least 1");
  if (k_values.empty()) throw std::invalid_argument("at least one k value is required");
  for (int k : k_values) {
    if (k < 1 || static_cast<std::size_t>(k) > n_links) {
      throw std::invalid_argument("k values must lie in 1..n_links");
    }
  }
  if (!(demand_lo > 0.0) || demand_lo > demand_hi) {
    throw std::invalid_argument("demand range must satisfy 0 < lo <= hi");
  }
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config) {
  config.validate();
  const bool oracle = config.run_oracle && config.n_links <= kOracleMaxLinks;
  std::vector<std::vector<SweepRow>> per_seed(config.n_instances);

  parallel_for(config.n_instances, config.threads, [&](std::size_t s) {
    const std::uint64_t seed = config.seed + s;
    const Instance inst = generate_instance(seed, config.n_links, config.demand_lo, config.demand_hi);
    std::optional<double> t_star;
    if (oracle) t_star = brute_force_solve(inst, TrueRates(inst)).schedule.total;
    for (int k : config.k_values) {
      const auto start = Clock::now();
      const Clustering cl = kmeans(inst.lengths, k, seed, config.restarts);
      const BoundsReport rep = compute_bounds(inst, cl, t_star);
      SweepRow row;
      row.seed = seed;
      row.k = k;
      row.n = config.n_links;
      row.t_lower = rep.t_lower;
      row.t_upper = rep.t_upper;
      row.t_upper_improved = rep.t_upper_improved;
      row.t_approx = rep.t_approx;
      row.t_star = t_star;
      row.solve_ms = config.record_timing ? elapsed_ms(start) : 0.0;
      if (!sandwich_holds(rep, 1e-6)) {
        throw std::runtime_error("bound sandwich violated at seed " + std::to_string(seed) +
                                 ", k " + std::to_string(k));
      }
      per_seed[s].push_back(row);
    }
  });

  std::vector<SweepRow> rows;
  for (auto& block : per_seed) rows.insert(rows.end(), block.begin(), block.end());
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return a.seed != b.seed ? a.seed < b.seed : a.k < b.k;
  });
  return rows;
}

std::vector<SweepSummary> summarize(const std::vector<SweepRow>& rows) {
  std::map<int, SweepSummary> by_k;
  std::map<int, std::size_t> star_count;
  for (const auto& r : rows) {
    SweepSummary& s = by_k[r.k];
    s.k = r.k;
    ++s.count;
    s.mean_t_lower += r.t_lower;
    s.mean_t_upper += r.t_upper;
    s.mean_t_upper_improved += r.t_upper_improved;
    s.mean_t_approx += r.t_approx;
    if (r.t_star) {
      s.mean_t_star = s.mean_t_star.value_or(0.0) + *r.t_star;
      ++star_count[r.k];
    }
    s.mean_norm_gap_bounds += r.norm_gap_bounds();
    s.mean_norm_gap_improved += r.norm_gap_improved();
    s.mean_norm_approx += r.norm_approx();
    s.mean_solve_ms += r.solve_ms;
  }
  std::vector<SweepSummary> out;
  for (auto& [k, s] : by_k) {
    const double c = static_cast<double>(s.count);
    s.mean_t_lower /= c;
    s.mean_t_upper /= c;
    s.mean_t_upper_improved /= c;
    s.mean_t_approx /= c;
    if (s.mean_t_star) {
      if (star_count[k] == s.count) {
        *s.mean_t_star /= c;
      } else {
        s.mean_t_star.reset();
      }
    }
    s.mean_norm_gap_bounds /= c;
    s.mean_norm_gap_improved /= c;
    s.mean_norm_approx /= c;
    s.mean_solve_ms /= c;
    out.push_back(s);
  }
  return out;
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepHeader << '\n';
  for (const auto& r : rows) {
    out << r.seed << ',' << r.k << ',' << r.n << ',' << format_double(r.t_lower) << ','
        << format_double(r.t_upper) << ',' << format_double(r.t_upper_improved) << ','
        << format_double(r.t_approx) << ',' << (r.t_star ? format_double(*r.t_star) : "") << ','
        << format_double(r.norm_gap_bounds()) << ',' << format_double(r.norm_gap_improved()) << ','
        << format_double(r.norm_approx()) << ',' << format_double(r.solve_ms) << '\n';
  }
  const std::size_t n = rows.empty() ? 0 : rows.front().n;
  for (const auto& s : summarize(rows)) {
    out << "mean," << s.k << ',' << n << ',' << format_double(s.mean_t_lower) << ','
        << format_double(s.mean_t_upper) << ',' << format_double(s.mean_t_upper_improved) << ','
        << format_double(s.mean_t_approx) << ','
        << (s.mean_t_star ? format_double(*s.mean_t_star) : "") << ','
        << format_double(s.mean_norm_gap_bounds) << ',' << format_double(s.mean_norm_gap_improved)
        << ',' << format_double(s.mean_norm_approx) << ',' << format_double(s.mean_solve_ms) << '\n';
  }
}

void write_approx_cdf_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  std::map<int, std::vector<double>> by_k;
  for (const auto& r : rows) by_k[r.k].push_back(r.norm_approx());
  out << "k,norm_approx,cdf\n";
  for (auto& [k, values] : by_k) {
    std::sort(values.begin(), values.end());
    for (std::size_t i = 0; i < values.size(); ++i) {
      out << k << ',' << format_double(values[i]) << ','
          << format_double(static_cast<double>(i + 1) / static_cast<double>(values.size())) << '\n';
    }
  }
}

std::vector<std::filesystem::path> generate_instances(const ExperimentConfig& config,
                                                      const std::filesystem::path& dir) {
  config.validate();
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  for (std::size_t s = 0; s < config.n_instances; ++s) {
    const std::uint64_t seed = config.seed + s;
    const Instance inst = generate_instance(seed, config.n_links, config.demand_lo, config.demand_hi);
    const auto path = dir / ("instance_" + std::to_string(seed) + ".json");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << instance_to_json(inst);
    if (!f) throw std::runtime_error("write failed for " + path.string());
    written.push_back(path);
  }
  return written;
}

SolveMethod parse_solve_method(const std::string& name) {
  if (name == "oracle") return SolveMethod::kOracle;
  if (name == "colgen") return SolveMethod::kColgen;
  if (name == "dual-reduce") return SolveMethod::kDualReduce;
  if (name == "decomposed") return SolveMethod::kDecomposed;
  throw std::invalid_argument("unknown method: " + name);
}

std::string to_string(SolveMethod method) {
  switch (method) {
    case SolveMethod::kOracle: return "oracle";
    case SolveMethod::kColgen: return "colgen";
    case SolveMethod::kDualReduce: return "dual-reduce";
    case SolveMethod::kDecomposed: return "decomposed";
  }
  return "?";
}

namespace {

void copy_schedule(const Instance& inst, const Schedule& schedule, SolveReport& rep) {
  rep.has_schedule = true;
  for (const auto& e : schedule.entries) {
    std::vector<int> members;
    for (int link : e.group.members()) members.push_back(static_cast<int>(inst.original_index[link]));
    std::sort(members.begin(), members.end());
    rep.entries.emplace_back(std::move(members), e.duration);
  }
}

}  // namespace

SolveReport solve_instance(const Instance& instance, const SolveRequest& request) {
  SolveReport rep;
  rep.method = to_string(request.method);
  rep.rates = request.variant ? to_string(*request.variant) : "true";
  rep.k = request.k;

  if (!request.variant) {
    if (request.method != SolveMethod::kOracle) {
      throw Refusal("true SINR rates are not MCCR; only the oracle accepts them");
    }
    if (instance.n_links() > kOracleMaxLinks) {
      throw Refusal("oracle is capped at " + std::to_string(kOracleMaxLinks) + " links");
    }
    const OracleResult res = brute_force_solve(instance, TrueRates(instance));
    rep.total = res.schedule.total;
    rep.iterations = res.lp.iterations;
    rep.columns = res.columns;
    rep.certified = true;
    rep.note = "optimal over all groups";
    copy_schedule(instance, res.schedule, rep);
    return rep;
  }

  if (request.k < 1 || static_cast<std::size_t>(request.k) > instance.n_links()) {
    throw Refusal("k must lie in 1..N");
  }
  const Clustering cl = kmeans(instance.lengths, request.k, request.seed, request.restarts);
  const RateTable table = build_rate_table(instance, cl, *request.variant);

  switch (request.method) {
    case SolveMethod::kOracle: {
      if (instance.n_links() > kOracleMaxLinks) {
        throw Refusal("oracle is capped at " + std::to_string(kOracleMaxLinks) + " links");
      }
      const OracleResult res = brute_force_solve(instance, TableRates(table, cl));
      rep.total = res.schedule.total;
      rep.iterations = res.lp.iterations;
      rep.columns = res.columns;
      rep.certified = true;
      rep.note = "optimal over all groups";
      copy_schedule(instance, res.schedule, rep);
      break;
    }
    case SolveMethod::kColgen: {
      const ColgenResult res = colgen_solve(instance, table, cl);
      rep.total = res.schedule.total;
      rep.iterations = res.iterations;
      rep.columns = res.columns;
      rep.certified = res.final_reduced_cost >= -ColgenOptions{}.eps;
      rep.note = "final pricing reduced cost " + format_double(res.final_reduced_cost);
      copy_schedule(instance, res.schedule, rep);
      break;
    }
    case SolveMethod::kDualReduce: {
      const ReducedDualSolution res = reduced_dual_solve(instance, table, cl);
      rep.total = res.objective;
      rep.iterations = res.iterations;
      rep.columns = res.lp_cols;
      rep.certified = true;
      rep.note = "no primal schedule";
      break;
    }
    case SolveMethod::kDecomposed: {
      const DecomposedResult res = decomposed_solve(instance, table, cl);
      rep.total = res.schedule.total;
      rep.certified = true;
      rep.note = res.used_t3 ? "single-link condition" : "uniform-demand condition";
      copy_schedule(instance, res.schedule, rep);
      break;
    }
  }
  return rep;
}

std::string solve_report_json(const SolveReport& report) {
  nlohmann::ordered_json doc;
  doc["method"] = report.method;
  doc["rates"] = report.rates;
  doc["k"] = report.k;
  doc["total"] = report.total;
  doc["certified"] = report.certified;
  doc["iterations"] = report.iterations;
  doc["columns"] = report.columns;
  doc["note"] = report.note;
  if (report.has_schedule) {
    auto& entries = doc["schedule"] = nlohmann::ordered_json::array();
    for (const auto& [members, duration] : report.entries) {
      entries.push_back({{"links", members}, {"duration", duration}});
    }
  } else {
    doc["schedule"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

std::vector<BenchRow> run_bench(const BenchConfig& config) {
  std::vector<BenchRow> rows;
  auto measure = [&](const std::string& sweep, std::size_t n, int k) {
    for (std::size_t s = 0; s < config.n_instances; ++s) {
      const std::uint64_t seed = config.seed + s;
      const Instance inst = generate_instance(seed, n, config.demand_lo, config.demand_hi);
      const Clustering cl = kmeans(inst.lengths, k, seed);
      const RateTable table = build_rate_table(inst, cl, RateVariant::kMean);
      BenchRow row;
      row.sweep = sweep;
      row.n = n;
      row.k = k;
      row.seed = seed;
      row.profiles = table.profile_count();

      auto start = Clock::now();
      const ReducedDualSolution dual = reduced_dual_solve(inst, table, cl);
      row.dual_reduce_ms = elapsed_ms(start);
      row.reduced_dual_rows = dual.lp_rows;

      start = Clock::now();
      const ColgenResult cg = colgen_solve(inst, table, cl);
      row.colgen_ms = elapsed_ms(start);
      row.colgen_columns = cg.columns;
      row.rel_diff = std::abs(dual.objective - cg.schedule.total) / cg.schedule.total;
      rows.push_back(row);
    }
  };
  for (std::size_t n : config.n_values) {
    if (static_cast<std::size_t>(config.fixed_k) <= n) measure("n", n, config.fixed_k);
  }
  for (int k : config.k_values) {
    if (static_cast<std::size_t>(k) <= config.fixed_n) measure("k", config.fixed_n, k);
  }
  return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << kBenchHeader << '\n';
  for (const auto& r : rows) {
    out << r.sweep << ',' << r.n << ',' << r.k << ',' << r.seed << ',' << r.profiles << ','
        << r.reduced_dual_rows << ',' << r.colgen_columns << ',' << format_double(r.dual_reduce_ms)
        << ',' << format_double(r.colgen_ms) << ',' << format_double(r.rel_diff) << '\n';
  }
}

}  // namespace mtsp
