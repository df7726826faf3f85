#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "laprl/config.hpp"
#include "laprl/environment.hpp"
#include "laprl/metrics.hpp"

namespace laprl {

struct SeedResult {
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
  RunMetrics metrics;
};

// Builds the environment a run wants, including installing the switch
// schedule for the non-stationary variants.
std::unique_ptr<Environment> make_run_env(const RunConfig& cfg, std::uint64_t seed);

// Executes one seed end to end and returns its metric curves.
RunMetrics run_single(const RunConfig& cfg, std::uint64_t seed);

// Fans seeds out to worker threads, writes per-seed and aggregate CSVs plus
// a manifest under cfg output_dir. A failing seed is recorded and the rest
// continue; throws TrainingError only if every seed failed.
std::vector<SeedResult> run_experiment(const RunConfig& cfg);

// Cross product of a grid file over the base config. Grid grammar: one
// `key = v1 | v2 | ...` line per swept key. Each point runs in its own
// subdirectory named by the swept values.
void run_sweep(const RunConfig& base, const std::string& grid_path);

// Oracle eigenfunction heatmap for a grid env (one CSV grid per function).
void export_heatmap(const RunConfig& cfg, const std::string& out_prefix, int d);

std::string version_string();

}  // namespace laprl
