// mtsp: generate instances, solve one instance, and run the K sweep and
// runtime benchmark. Results go to CSV (sweep-k, bench) or JSON (solve).

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mtsp/errors.hpp"
#include "mtsp/experiments.hpp"
#include "mtsp/netmodel.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + out_path);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum-time link scheduling under multi-cluster cardinality-based rates"};
  app.require_subcommand(1);

  mtsp::ExperimentConfig cfg;
  std::string out_path;

  auto add_instance_flags = [&](CLI::App* cmd) {
    cmd->add_option("--n", cfg.n_links, "links per instance");
    cmd->add_option("--seeds", cfg.n_instances, "number of instances (seeds)");
    cmd->add_option("--seed", cfg.seed, "first seed");
    cmd->add_option("--demand-lo", cfg.demand_lo, "lower demand bound (bits)");
    cmd->add_option("--demand-hi", cfg.demand_hi, "upper demand bound (bits)");
  };

  auto* gen = app.add_subcommand("generate", "write random instances as JSON files");
  add_instance_flags(gen);
  gen->add_option("--out", out_path, "output directory")->required();

  std::string instance_path;
  std::string method = "colgen";
  std::string variant = "mean";
  int solve_k = 1;
  auto* solve = app.add_subcommand("solve", "solve one instance");
  solve->add_option("instance", instance_path, "instance JSON file")->required();
  solve->add_option("--method", method, "oracle | colgen | dual-reduce | decomposed");
  solve->add_option("--k", solve_k, "cluster count");
  solve->add_option("--variant", variant, "mean | lower | upper | true (oracle only)");
  solve->add_option("--seed", cfg.seed, "k-means seed");
  solve->add_option("--out", out_path, "report path (default stdout)");

  std::string cdf_path;
  bool no_timing = false;
  bool no_oracle = false;
  auto* sweep = app.add_subcommand("sweep-k", "bounds and approximation over a K sweep");
  add_instance_flags(sweep);
  sweep->add_option("--k", cfg.k_values, "cluster counts")->delimiter(',');
  sweep->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
  sweep->add_option("--out", out_path, "CSV path (default stdout)");
  sweep->add_option("--cdf-out", cdf_path, "CSV path for the per-k CDF of the approximation");
  sweep->add_flag("--no-timing", no_timing, "write solve_ms = 0 for reproducible files");
  sweep->add_flag("--no-oracle", no_oracle, "normalize by the lower bound even when N is small");

  mtsp::BenchConfig bench_cfg;
  auto* bench = app.add_subcommand("bench", "runtime of the reduced dual LP and column generation");
  bench->add_option("--n", bench_cfg.n_values, "N values at fixed K")->delimiter(',');
  bench->add_option("--k", bench_cfg.k_values, "K values at fixed N")->delimiter(',');
  bench->add_option("--fixed-k", bench_cfg.fixed_k, "K used for the N sweep");
  bench->add_option("--fixed-n", bench_cfg.fixed_n, "N used for the K sweep");
  bench->add_option("--seeds", bench_cfg.n_instances, "instances per point");
  bench->add_option("--seed", bench_cfg.seed, "first seed");
  bench->add_option("--out", out_path, "CSV path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const auto files = mtsp::generate_instances(cfg, out_path);
      std::cerr << "wrote " << files.size() << " instances to " << out_path << "\n";
    } else if (solve->parsed()) {
      const mtsp::Instance inst = mtsp::instance_from_json(read_file(instance_path));
      mtsp::SolveRequest req;
      req.method = mtsp::parse_solve_method(method);
      req.k = solve_k;
      req.seed = cfg.seed;
      if (variant == "true") {
        req.variant.reset();
      } else {
        req.variant = mtsp::parse_rate_variant(variant);
      }
      emit(out_path, mtsp::solve_report_json(mtsp::solve_instance(inst, req)));
    } else if (sweep->parsed()) {
      cfg.record_timing = !no_timing;
      cfg.run_oracle = !no_oracle;
      const auto rows = mtsp::run_sweep(cfg);
      std::ostringstream csv;
      mtsp::write_sweep_csv(csv, rows);
      emit(out_path, csv.str());
      if (!cdf_path.empty()) {
        std::ostringstream cdf;
        mtsp::write_approx_cdf_csv(cdf, rows);
        emit(cdf_path, cdf.str());
      }
    } else if (bench->parsed()) {
      std::ostringstream csv;
      mtsp::write_bench_csv(csv, mtsp::run_bench(bench_cfg));
      emit(out_path, csv.str());
    }
  } catch (const mtsp::Refusal& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
