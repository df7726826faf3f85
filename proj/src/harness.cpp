#include "laprl/harness.hpp"

#include <algorithm>
#include <deque>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

#include "laprl/controller.hpp"
#include "laprl/error.hpp"
#include "laprl/laplacian.hpp"

namespace laprl {

namespace fs = std::filesystem;

std::string version_string() {
#ifdef LAPRL_VERSION
  return LAPRL_VERSION;
#else
  return "laprl-dev";
#endif
}

std::unique_ptr<Environment> make_run_env(const RunConfig& cfg, std::uint64_t seed) {
  const std::string name = cfg.get_str("env");
  const bool tabular = algorithm_is_tabular(parse_algorithm(cfg.get_str("algorithm")));
  auto env = make_env(name, seed, tabular);
  const long long switch_step = cfg.get_int("schedule.switch_step");
  if (switch_step >= 0) {
    std::string after;
    if (name == "nine_rooms_goal_switch") after = "nine_rooms_after_goal";
    else if (name == "nine_rooms_topology_switch") after = "nine_rooms_after_topology";
    else throw ConfigError("schedule.switch_step set on non-switching env: " + name);
    NonStationarySchedule sched;
    sched.switch_step = switch_step;
    sched.after = GridMap::parse(builtin_map_text(after), after);
    env->set_schedule(std::move(sched));
  }
  return env;
}

RunMetrics run_single(const RunConfig& cfg, std::uint64_t seed) {
  const ControllerConfig ccfg = cfg.controller_config();
  auto env = make_run_env(cfg, seed);
  auto agent = make_agent(ccfg, *env, seed);
  RngStream env_rng(RngStream::derive(seed, "env"));

  const long long total = cfg.get_int("total_steps");
  const long long eval_interval = cfg.get_int("eval_interval");
  if (eval_interval < 1) throw ConfigError("eval_interval must be >= 1");

  RunMetrics m;
  m.visit_counts.assign(static_cast<size_t>(env->num_states()), 0);
  std::vector<char> seen(static_cast<size_t>(env->num_states()), 0);
  auto mark = [&](int id, bool count_step) {
    if (id >= static_cast<int>(seen.size())) {
      seen.resize(static_cast<size_t>(id) + 1, 0);
      m.visit_counts.resize(static_cast<size_t>(id) + 1, 0);
    }
    seen[static_cast<size_t>(id)] = 1;
    if (count_step) ++m.visit_counts[static_cast<size_t>(id)];
  };

  std::deque<double> recent;  // last 20 episode returns
  double ep_return = 0.0;
  bool need_reset = true;
  EnvState s;

  for (long long t = 1; t <= total; ++t) {
    if (need_reset) {
      s = env->reset();
      agent->begin_episode(s);
      mark(s.tabular_id, false);
      ep_return = 0.0;
      need_reset = false;
    }
    const int a = agent->act(s);
    const StepOutcome out = env->step(a, env_rng);
    agent->observe(s, a, out);
    mark(out.next_state.tabular_id, true);
    ep_return += out.reward;
    s = out.next_state;
    if (out.episode_end) {
      recent.push_back(ep_return);
      if (recent.size() > 20) recent.pop_front();
      need_reset = true;
    }
    // Two-phased runs report the task curve from the end of discovery.
    if (ccfg.algorithm == Algorithm::kDceoTwoPhased && t == ccfg.t_discovery) recent.clear();

    if (t % eval_interval == 0) {
      long long distinct = std::count(seen.begin(), seen.end(), char(1));
      m.coverage.add(t, static_cast<double>(distinct) / env->num_states());
      double mean_ret =
          recent.empty()
              ? 0.0
              : std::accumulate(recent.begin(), recent.end(), 0.0) / recent.size();
      m.ep_return.add(t, mean_ret);
      m.main_loss.add(t, agent->last_main_loss().value_or(0.0));
      m.repr_loss.add(t, agent->last_repr_loss().value_or(0.0));
    }
  }
  return m;
}

namespace {

void write_seed_csvs(const fs::path& dir, std::uint64_t seed, const RunMetrics& m,
                     const RunConfig& cfg) {
  const std::string tag = "seed_" + std::to_string(seed);
  write_curve_csv((dir / (tag + "_coverage.csv")).string(), m.coverage);
  write_curve_csv((dir / (tag + "_return.csv")).string(), m.ep_return);
  write_curve_csv((dir / (tag + "_main_loss.csv")).string(), m.main_loss);
  write_curve_csv((dir / (tag + "_repr_loss.csv")).string(), m.repr_loss);
  const std::string env_name = cfg.get_str("env");
  if (env_name != "rubiks2x2") {
    GridMap map = GridMap::parse(builtin_map_text(env_name == "nine_rooms_goal_switch" ||
                                                          env_name == "nine_rooms_topology_switch"
                                                      ? "nine_rooms"
                                                      : env_name),
                                 env_name);
    write_visitation_csv((dir / (tag + "_visitation.csv")).string(), map, m.visit_counts);
  }
}

}  // namespace

std::vector<SeedResult> run_experiment(const RunConfig& cfg) {
  const auto seeds = cfg.seeds();
  const fs::path dir = cfg.get_str("output_dir");
  fs::create_directories(dir);

  std::vector<SeedResult> results(seeds.size());
  std::vector<std::thread> workers;
  workers.reserve(seeds.size());
  for (size_t i = 0; i < seeds.size(); ++i) {
    results[i].seed = seeds[i];
    workers.emplace_back([&cfg, &results, i] {
      try {
        results[i].metrics = run_single(cfg, results[i].seed);
      } catch (const std::exception& e) {
        results[i].failed = true;
        results[i].error = e.what();
      }
    });
  }
  for (auto& w : workers) w.join();

  {
    std::ofstream manifest(dir / "manifest.txt");
    manifest << "# version: " << version_string() << "\n";
    manifest << cfg.serialize();
    for (const auto& r : results) {
      manifest << "# seed " << r.seed << ": " << (r.failed ? "failed: " + r.error : "ok")
               << "\n";
    }
  }

  std::vector<const Curve*> cov, ret, mloss, rloss;
  for (const auto& r : results) {
    if (r.failed) continue;
    write_seed_csvs(dir, r.seed, r.metrics, cfg);
    cov.push_back(&r.metrics.coverage);
    ret.push_back(&r.metrics.ep_return);
    mloss.push_back(&r.metrics.main_loss);
    rloss.push_back(&r.metrics.repr_loss);
  }
  if (cov.empty()) {
    throw TrainingError("all seeds failed; first error: " +
                        (results.empty() ? std::string("no seeds") : results[0].error));
  }
  write_aggregate_csv((dir / "coverage_agg.csv").string(), cov);
  write_aggregate_csv((dir / "return_agg.csv").string(), ret);
  write_aggregate_csv((dir / "main_loss_agg.csv").string(), mloss);
  write_aggregate_csv((dir / "repr_loss_agg.csv").string(), rloss);
  return results;
}

void run_sweep(const RunConfig& base, const std::string& grid_path) {
  std::ifstream in(grid_path);
  if (!in) throw ConfigError("cannot open grid file: " + grid_path);
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream probe(line);
    std::string nonblank;
    if (!(probe >> nonblank)) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("grid line needs key = v1 | v2: " + line);
    std::string key = line.substr(0, eq);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t") + 1);
    std::vector<std::string> vals;
    std::istringstream vs(line.substr(eq + 1));
    std::string v;
    while (std::getline(vs, v, '|')) {
      v.erase(0, v.find_first_not_of(" \t"));
      auto last = v.find_last_not_of(" \t");
      v = last == std::string::npos ? "" : v.substr(0, last + 1);
      if (!v.empty()) vals.push_back(v);
    }
    if (vals.empty()) throw ConfigError("grid key has no values: " + key);
    axes.emplace_back(key, vals);
  }
  if (axes.empty()) throw ConfigError("empty grid file: " + grid_path);

  const std::string root = base.get_str("output_dir");
  std::vector<size_t> idx(axes.size(), 0);
  while (true) {
    RunConfig point = base;
    std::string sub;
    for (size_t a = 0; a < axes.size(); ++a) {
      point.set(axes[a].first, axes[a].second[idx[a]]);
      if (a) sub += "_";
      sub += axes[a].first + "=" + axes[a].second[idx[a]];
    }
    point.set("output_dir", root + "/" + sub);
    run_experiment(point);

    size_t a = 0;
    for (; a < axes.size(); ++a) {
      if (++idx[a] < axes[a].second.size()) break;
      idx[a] = 0;
    }
    if (a == axes.size()) break;
  }
}

void export_heatmap(const RunConfig& cfg, const std::string& out_prefix, int d) {
  auto env = make_run_env(cfg, static_cast<std::uint64_t>(cfg.get_int("seed")));
  if (!env->state_coords(0).has_value()) {
    throw UsageError("export-heatmap needs a grid environment");
  }
  GraphLaplacian lap = build_laplacian(*env);
  EigenSystem eig = eigendecompose(lap, d);
  export_eigenfunctions_csv(eig, *env, out_prefix + "_eigenfunctions.csv");
  // One grid per eigenfunction, aligned with the map layout.
  const std::string name = cfg.get_str("env");
  GridMap map = GridMap::parse(
      builtin_map_text(name == "nine_rooms_goal_switch" || name == "nine_rooms_topology_switch"
                           ? "nine_rooms"
                           : name),
      name);
  for (int i = 0; i < eig.count(); ++i) {
    std::ofstream out(out_prefix + "_e" + std::to_string(i + 1) + ".csv");
    if (!out) throw InternalError("cannot write heatmap for " + out_prefix);
    int id = 0;
    for (int y = 0; y < map.height; ++y) {
      for (int x = 0; x < map.width; ++x) {
        if (x) out << ",";
        if (map.at(x, y) == '#') out << "nan";
        else out << eig.eigenfunctions(id++, i);
      }
      out << "\n";
    }
  }
}

}  // namespace laprl
