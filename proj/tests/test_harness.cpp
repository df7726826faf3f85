#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "laprl/config.hpp"
#include "laprl/error.hpp"
#include "laprl/harness.hpp"

using namespace laprl;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RunConfig tiny_config(const std::string& out_dir) {
  RunConfig cfg = RunConfig::from_string(
      "env = two_rooms\n"
      "algorithm = random\n"
      "total_steps = 3000\n"
      "eval_interval = 500\n");
  cfg.set("output_dir", out_dir);
  return cfg;
}

}  // namespace

TEST_CASE("config parsing: comments, whitespace, dotted keys, errors") {
  RunConfig cfg = RunConfig::from_string(
      "# a comment\n"
      "env = maze   # trailing comment\n"
      "agent.gamma = 0.95\n"
      "\n"
      "seeds = 3, 5, 9\n");
  CHECK(cfg.get_str("env") == "maze");
  CHECK(cfg.get_double("agent.gamma") == doctest::Approx(0.95));
  CHECK(cfg.seeds() == std::vector<std::uint64_t>{3, 5, 9});
  CHECK_THROWS_AS(RunConfig::from_string("not a pair\n"), ConfigError);
  CHECK_THROWS_AS(cfg.get_int("agent.gamma"), ConfigError);
  CHECK_THROWS_AS(cfg.get_str("missing.key"), ConfigError);
}

TEST_CASE("defaults are materialized and serialization round-trips") {
  RunConfig cfg = RunConfig::from_string("env = maze\n");
  // every controller knob must be explicit after load
  CHECK(cfg.has("agent.gamma"));
  CHECK(cfg.has("options.num"));
  CHECK(cfg.has("repr.beta"));
  CHECK(cfg.has("baseline.ez_k"));
  RunConfig again = RunConfig::from_string(cfg.serialize());
  CHECK(again.serialize() == cfg.serialize());
}

TEST_CASE("seed fan: base seed plus count") {
  RunConfig cfg = RunConfig::from_string("seed = 10\nnum_seeds = 3\n");
  CHECK(cfg.seeds() == std::vector<std::uint64_t>{10, 11, 12});
}

TEST_CASE("run_single is deterministic: same config and seed, same curves") {
  RunConfig cfg = tiny_config("/tmp/laprl_test_unused");
  RunMetrics a = run_single(cfg, 42);
  RunMetrics b = run_single(cfg, 42);
  CHECK(a.coverage.values == b.coverage.values);
  CHECK(a.ep_return.values == b.ep_return.values);
  CHECK(a.visit_counts == b.visit_counts);
  RunMetrics c = run_single(cfg, 43);
  CHECK(a.coverage.values != c.coverage.values);
}

TEST_CASE("coverage is monotone, bounded by 1, and counts the start state") {
  RunConfig cfg = tiny_config("/tmp/laprl_test_unused");
  RunMetrics m = run_single(cfg, 7);
  double prev = 0.0;
  for (double v : m.coverage.values) {
    CHECK(v >= prev);
    CHECK(v <= 1.0);
    prev = v;
  }
  CHECK(m.coverage.values.front() > 0.0);
}

TEST_CASE("visitation export sums to total steps taken") {
  RunConfig cfg = tiny_config("/tmp/laprl_test_unused");
  RunMetrics m = run_single(cfg, 3);
  long long total = 0;
  for (long long v : m.visit_counts) total += v;
  CHECK(total == cfg.get_int("total_steps"));
}

TEST_CASE("run_experiment writes per-seed and aggregate CSVs plus a manifest") {
  fs::path dir = fs::temp_directory_path() / "laprl_exp_test";
  fs::remove_all(dir);
  RunConfig cfg = tiny_config(dir.string());
  cfg.set("num_seeds", "2");
  auto results = run_experiment(cfg);
  CHECK(results.size() == 2);
  CHECK(fs::exists(dir / "seed_0_coverage.csv"));
  CHECK(fs::exists(dir / "seed_1_return.csv"));
  CHECK(fs::exists(dir / "coverage_agg.csv"));
  CHECK(fs::exists(dir / "manifest.txt"));
  std::string manifest = slurp(dir / "manifest.txt");
  CHECK(manifest.find("env = two_rooms") != std::string::npos);
  CHECK(manifest.find("# version:") != std::string::npos);

  // aggregate mean is an exact function of the per-seed files
  std::string agg = slurp(dir / "coverage_agg.csv");
  CHECK(agg.rfind("step,mean,std", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("re-running a config yields byte-identical CSVs") {
  fs::path dir1 = fs::temp_directory_path() / "laprl_rep_a";
  fs::path dir2 = fs::temp_directory_path() / "laprl_rep_b";
  fs::remove_all(dir1);
  fs::remove_all(dir2);
  RunConfig cfg = tiny_config(dir1.string());
  cfg.set("num_seeds", "2");
  run_experiment(cfg);
  cfg.set("output_dir", dir2.string());
  run_experiment(cfg);
  for (const char* f : {"seed_0_coverage.csv", "seed_1_return.csv", "coverage_agg.csv",
                        "return_agg.csv", "seed_0_visitation.csv"}) {
    CHECK(slurp(dir1 / f) == slurp(dir2 / f));
  }
  fs::remove_all(dir1);
  fs::remove_all(dir2);
}

TEST_CASE("auc restricts to steps past the cut") {
  Curve c;
  c.add(0, 0.0);
  c.add(10, 1.0);
  c.add(20, 1.0);
  CHECK(c.auc(0) == doctest::Approx(5.0 + 10.0));
  CHECK(c.auc(10) == doctest::Approx(10.0));
  CHECK(c.auc(15) == doctest::Approx(5.0));
}

TEST_CASE("export_heatmap rejects non-grid envs and writes oracle grids") {
  fs::path dir = fs::temp_directory_path() / "laprl_heat_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  RunConfig cfg = RunConfig::from_string("env = two_rooms\n");
  export_heatmap(cfg, (dir / "oracle").string(), 3);
  CHECK(fs::exists(dir / "oracle_e1.csv"));
  CHECK(fs::exists(dir / "oracle_e3.csv"));
  CHECK(fs::exists(dir / "oracle_eigenfunctions.csv"));
  // e1 spans the Laplacian kernel: constant over open cells
  std::ifstream e1(dir / "oracle_e1.csv");
  std::string line;
  double lo = 1e9, hi = -1e9;
  while (std::getline(e1, line)) {
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) {
      if (cell == "nan") continue;
      double v = std::stod(cell);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  CHECK(hi - lo < 1e-9);

  RunConfig cube = RunConfig::from_string("env = rubiks2x2\n");
  CHECK_THROWS_AS(export_heatmap(cube, (dir / "cube").string(), 3), UsageError);
  fs::remove_all(dir);
}

TEST_CASE("sweep runs the cross product into subdirectories") {
  fs::path dir = fs::temp_directory_path() / "laprl_sweep_test";
  fs::remove_all(dir);
  RunConfig cfg = tiny_config(dir.string());
  cfg.set("total_steps", "1000");
  fs::create_directories(dir);
  fs::path grid = dir / "grid.txt";
  {
    std::ofstream g(grid);
    g << "agent.gamma = 0.9 | 0.99\n";
    g << "seed = 1 | 2\n";
  }
  run_sweep(cfg, grid.string());
  int points = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_directory()) ++points;
  }
  CHECK(points == 4);
  fs::remove_all(dir);
}
