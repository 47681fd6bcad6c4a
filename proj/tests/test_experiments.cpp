#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mtsp/errors.hpp"
#include "mtsp/experiments.hpp"
#include "mtsp/oracle.hpp"

using namespace mtsp;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MTSP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("mtsp_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.n_links = 8;
  cfg.k_values = {1, 2, 3};
  cfg.n_instances = 5;
  cfg.seed = 40;
  cfg.threads = 2;
  cfg.record_timing = false;
  return cfg;
}

}  // namespace

TEST_CASE("config validation") {
  ExperimentConfig cfg = small_config();
  CHECK_NOTHROW(cfg.validate());
  cfg.k_values = {0};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.k_values = {9};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_config();
  cfg.n_instances = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_config();
  cfg.demand_lo = 2000.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("format_double keeps nine significant digits") {
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(1.0 / 3.0) == "0.333333333");
  CHECK(format_double(123456789012.0) == "1.23456789e+11");
}

TEST_CASE("sweep rows, summaries and CSV") {
  const ExperimentConfig cfg = small_config();
  const auto rows = run_sweep(cfg);
  REQUIRE(rows.size() == 15);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::make_pair(rows[i - 1].seed, rows[i - 1].k) < std::make_pair(rows[i].seed, rows[i].k));
  }
  for (const auto& r : rows) {
    REQUIRE(r.t_star.has_value());
    CHECK(r.denominator() == *r.t_star);
    CHECK(r.t_lower <= *r.t_star * (1 + 1e-6));
    CHECK(*r.t_star <= r.t_upper_improved * (1 + 1e-6));
    CHECK(r.t_upper_improved <= r.t_upper * (1 + 1e-9));
    CHECK(r.solve_ms == 0.0);
  }
  // one oracle value per seed, shared by every k
  CHECK(rows[0].t_star == rows[1].t_star);

  const auto summary = summarize(rows);
  REQUIRE(summary.size() == 3);
  double mean_gap = 0.0;
  for (const auto& r : rows) {
    if (r.k == 2) mean_gap += r.norm_gap_bounds();
  }
  CHECK(summary[1].k == 2);
  CHECK(summary[1].count == 5);
  CHECK(summary[1].mean_norm_gap_bounds == doctest::Approx(mean_gap / 5));

  std::ostringstream csv;
  write_sweep_csv(csv, rows);
  const auto lines = lines_of(csv.str());
  REQUIRE(lines.size() == 1 + 15 + 3);
  CHECK(lines[0] == kSweepHeader);
  CHECK(lines[1].rfind("40,1,8,", 0) == 0);
  CHECK(lines[16].rfind("mean,1,8,", 0) == 0);
  for (const auto& line : lines) CHECK(std::count(line.begin(), line.end(), ',') == 11);

  // threads and reruns do not change a byte
  ExperimentConfig serial = cfg;
  serial.threads = 1;
  std::ostringstream again;
  write_sweep_csv(again, run_sweep(serial));
  CHECK(again.str() == csv.str());

  std::ostringstream cdf;
  write_approx_cdf_csv(cdf, rows);
  const auto cdf_lines = lines_of(cdf.str());
  REQUIRE(cdf_lines.size() == 1 + 15);
  CHECK(cdf_lines[0] == "k,norm_approx,cdf");
  CHECK(cdf_lines[5].substr(cdf_lines[5].rfind(',') + 1) == "1");
}

TEST_CASE("without the oracle rows are normalized by the lower bound") {
  ExperimentConfig cfg = small_config();
  cfg.run_oracle = false;
  cfg.n_instances = 2;
  for (const auto& r : run_sweep(cfg)) {
    CHECK_FALSE(r.t_star.has_value());
    CHECK(r.denominator() == r.t_lower);
    CHECK(r.norm_gap_bounds() == doctest::Approx((r.t_upper - r.t_lower) / r.t_lower));
  }
}

TEST_CASE("generate_instances writes deterministic files") {
  ExperimentConfig cfg = small_config();
  cfg.n_links = 15;
  cfg.n_instances = 4;
  cfg.seed = 0;
  const fs::path a = scratch_dir("gen_a");
  const fs::path b = scratch_dir("gen_b");
  const auto files = generate_instances(cfg, a);
  generate_instances(cfg, b);
  REQUIRE(files.size() == 4);
  for (const auto& f : files) {
    const std::string text = slurp(f);
    CHECK(text == slurp(b / f.filename()));
    const Instance inst = instance_from_json(text);
    CHECK(inst.n_links() == 15);
    for (double d : inst.demands) CHECK((d >= 100.0 && d <= 1500.0));
  }
  CHECK(files[2].filename() == "instance_2.json");
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("solve_instance") {
  const Instance inst = generate_instance(12, 9, 100, 1500);
  SolveRequest req;
  req.k = 2;

  req.method = SolveMethod::kOracle;
  const auto oracle = solve_instance(inst, req);
  req.method = SolveMethod::kColgen;
  const auto colgen = solve_instance(inst, req);
  req.method = SolveMethod::kDualReduce;
  const auto dual = solve_instance(inst, req);
  CHECK(colgen.total == doctest::Approx(oracle.total).epsilon(1e-6));
  CHECK(dual.total == doctest::Approx(oracle.total).epsilon(1e-6));
  CHECK(colgen.certified);
  CHECK(colgen.has_schedule);
  CHECK_FALSE(dual.has_schedule);
  CHECK(dual.note == "no primal schedule");

  const auto json = nlohmann::json::parse(solve_report_json(dual));
  CHECK(json["schedule"].is_null());
  CHECK(json["method"] == "dual-reduce");
  const auto cg_json = nlohmann::json::parse(solve_report_json(colgen));
  CHECK(cg_json["schedule"].size() == colgen.entries.size());

  SUBCASE("true rates go to the oracle only") {
    req.variant = std::nullopt;
    req.method = SolveMethod::kOracle;
    const auto truth = solve_instance(inst, req);
    CHECK(truth.rates == "true");
    CHECK(truth.total == doctest::Approx(brute_force_solve(inst, TrueRates(inst)).schedule.total));
    req.method = SolveMethod::kColgen;
    CHECK_THROWS_AS(solve_instance(inst, req), Refusal);
  }
  SUBCASE("oracle refuses large instances") {
    const Instance big = generate_instance(1, 25, 100, 1500);
    req.method = SolveMethod::kOracle;
    CHECK_THROWS_AS(solve_instance(big, req), Refusal);
  }
  SUBCASE("schedule links use the caller's indices") {
    const Instance shuffled = Instance::create({100, 900, 500}, {40, 10, 200}, 1, 1e-13, 4);
    req.k = 1;
    req.method = SolveMethod::kColgen;
    const auto rep = solve_instance(shuffled, req);
    std::vector<int> seen;
    for (const auto& [members, duration] : rep.entries) seen.insert(seen.end(), members.begin(), members.end());
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    CHECK(seen.size() <= 3);
    for (int i : seen) CHECK((i >= 0 && i < 3));
  }
  CHECK(parse_solve_method("decomposed") == SolveMethod::kDecomposed);
  CHECK_THROWS(parse_solve_method("simplex"));
}

TEST_CASE("bench rows") {
  BenchConfig cfg;
  cfg.n_values = {4, 6};
  cfg.k_values = {1, 2};
  cfg.fixed_n = 6;
  cfg.n_instances = 2;
  const auto rows = run_bench(cfg);
  REQUIRE(rows.size() == 8);
  for (const auto& r : rows) {
    CHECK(r.rel_diff <= 1e-6);
    CHECK(r.colgen_columns <= r.profiles + r.n);
    CHECK(r.reduced_dual_rows == r.profiles + r.n - static_cast<std::size_t>(r.k));
  }
  std::ostringstream csv;
  write_bench_csv(csv, rows);
  CHECK(lines_of(csv.str()).front() == kBenchHeader);
  CHECK(lines_of(csv.str()).size() == 9);
}

TEST_CASE("command line") {
  const fs::path dir = scratch_dir("cli");
  const std::string inst_dir = (dir / "inst").string();
  REQUIRE(run_cli("generate --n 6 --seeds 2 --seed 3 --out " + inst_dir) == 0);
  const std::string file = (dir / "inst" / "instance_3.json").string();
  CHECK(fs::exists(file));

  const std::string report = (dir / "report.json").string();
  CHECK(run_cli("solve " + file + " --method colgen --k 2 --out " + report) == 0);
  CHECK(nlohmann::json::parse(slurp(report))["method"] == "colgen");
  CHECK(run_cli("solve " + file + " --method colgen --variant true") == 2);
  CHECK(run_cli("solve " + file + " --method simplex") != 0);
  CHECK(run_cli("solve " + (dir / "missing.json").string()) == 1);

  const std::string csv1 = (dir / "a.csv").string();
  const std::string csv2 = (dir / "b.csv").string();
  REQUIRE(run_cli("sweep-k --n 6 --seeds 2 --k 1,2 --no-timing --out " + csv1) == 0);
  REQUIRE(run_cli("sweep-k --n 6 --seeds 2 --k 1,2 --no-timing --threads 1 --out " + csv2) == 0);
  CHECK(slurp(csv1) == slurp(csv2));
  CHECK(lines_of(slurp(csv1)).size() == 1 + 4 + 2);
  fs::remove_all(dir);
}
