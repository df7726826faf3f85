#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "laprl/config.hpp"
#include "laprl/error.hpp"
#include "laprl/harness.hpp"

namespace {

void apply_overrides(laprl::RunConfig& cfg, const std::vector<std::string>& sets) {
  for (const auto& kv : sets) {
    auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw laprl::UsageError("--set expects key=value, got: " + kv);
    }
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"laprl: Laplacian-based option discovery laboratory"};
  app.require_subcommand(1);

  std::string config_path, grid_path, out_prefix;
  std::vector<std::string> sets;
  int heatmap_d = 10;

  auto* run = app.add_subcommand("run", "run an experiment from a config file");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--set", sets, "override a config key (key=value, repeatable)");

  auto* sweep = app.add_subcommand("sweep", "cross-product sweep over a grid file");
  sweep->add_option("config", config_path, "base config file")->required();
  sweep->add_option("--grid", grid_path, "grid file: key = v1 | v2 | ...")->required();
  sweep->add_option("--set", sets, "override a config key (key=value, repeatable)");

  auto* heat = app.add_subcommand("export-heatmap", "export oracle eigenfunction grids");
  heat->add_option("config", config_path, "config file (selects the env)")->required();
  heat->add_option("--out", out_prefix, "output path prefix")->required();
  heat->add_option("--d", heatmap_d, "number of eigenfunctions");
  heat->add_option("--set", sets, "override a config key (key=value, repeatable)");

  auto* list = app.add_subcommand("list-envs", "list known environment names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (list->parsed()) {
      for (const char* name : {"nine_rooms", "maze", "two_rooms", "rubiks2x2",
                               "nine_rooms_goal_switch", "nine_rooms_topology_switch"}) {
        std::cout << name << "\n";
      }
      return 0;
    }
    laprl::RunConfig cfg = laprl::RunConfig::load(config_path);
    apply_overrides(cfg, sets);
    if (run->parsed()) {
      auto results = laprl::run_experiment(cfg);
      int failures = 0;
      for (const auto& r : results) {
        if (r.failed) {
          ++failures;
          std::cerr << "seed " << r.seed << " failed: " << r.error << "\n";
        }
      }
      std::cout << "wrote " << cfg.get_str("output_dir") << " (" << results.size() - failures
                << "/" << results.size() << " seeds ok)\n";
      return failures == 0 ? 0 : 2;
    }
    if (sweep->parsed()) {
      laprl::run_sweep(cfg, grid_path);
      std::cout << "sweep complete under " << cfg.get_str("output_dir") << "\n";
      return 0;
    }
    if (heat->parsed()) {
      laprl::export_heatmap(cfg, out_prefix, heatmap_d);
      std::cout << "wrote " << out_prefix << "_e1.." << heatmap_d << " grids\n";
      return 0;
    }
  } catch (const laprl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const laprl::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
