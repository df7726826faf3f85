#pragma once

#include <Eigen/Core>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "laprl/grid_map.hpp"
#include "laprl/rng.hpp"

namespace laprl {

// Canonical tabular state paired with its feature encoding.
struct EnvState {
  int tabular_id = -1;
  Eigen::VectorXd features;
};

struct StepOutcome {
  EnvState next_state;
  double reward = 0.0;
  bool episode_end = false;  // goal reached or truncated
  bool truncated = false;    // step cap hit
  int executed_action = -1;  // post-overwrite action that was applied
  bool overwritten = false;  // the 0.15 redraw fired (may re-pick the same action)
};

// Declarative task switch for the non-stationary variants. Applied at the
// first episode reset at or after switch_step.
struct NonStationarySchedule {
  long long switch_step = -1;
  GridMap after;
};

inline constexpr int kEpisodeCap = 100;
inline constexpr double kActionOverwriteProb = 0.15;

class Environment {
 public:
  virtual ~Environment() = default;

  virtual int num_actions() const = 0;
  virtual int num_states() const = 0;
  virtual int feature_dim() const = 0;
  virtual const std::string& name() const = 0;

  virtual EnvState reset() = 0;
  virtual StepOutcome step(int action, RngStream& rng) = 0;

  // All reachable states in tabular_id order (contiguous from 0).
  virtual std::vector<EnvState> enumerate_states() const = 0;
  virtual EnvState state(int tabular_id) const = 0;

  // Deterministic skeleton: successor id with the overwrite disabled.
  // Blocked moves return the same id.
  virtual int skeleton_next(int tabular_id, int action) const = 0;

  // Grid coordinates of a state, if the env is a grid (for heatmap export).
  virtual std::optional<std::pair<int, int>> state_coords(int tabular_id) const {
    (void)tabular_id;
    return std::nullopt;
  }

  virtual int episode_step_count() const = 0;
  virtual bool episode_done() const = 0;

  // Non-stationarity hook; default envs never switch.
  virtual void set_schedule(NonStationarySchedule schedule) { (void)schedule; }
  virtual long long global_step_count() const = 0;

  // Episodes truncate after this many steps (kEpisodeCap unless overridden).
  virtual void set_episode_cap(int cap) = 0;
};

class GridWorldEnv : public Environment {
 public:
  // Actions: 0=up, 1=down, 2=left, 3=right.
  GridWorldEnv(GridMap map, bool ignore_goal = false);

  int num_actions() const override { return 4; }
  int num_states() const override { return static_cast<int>(open_cells_.size()); }
  int feature_dim() const override { return map_.width * map_.height; }
  const std::string& name() const override { return map_.name; }

  EnvState reset() override;
  StepOutcome step(int action, RngStream& rng) override;

  std::vector<EnvState> enumerate_states() const override;
  EnvState state(int tabular_id) const override;
  int skeleton_next(int tabular_id, int action) const override;
  std::optional<std::pair<int, int>> state_coords(int tabular_id) const override;

  int episode_step_count() const override { return episode_steps_; }
  bool episode_done() const override { return done_; }

  void set_schedule(NonStationarySchedule schedule) override;
  long long global_step_count() const override { return global_steps_; }
  void set_episode_cap(int cap) override;

  const GridMap& map() const { return map_; }
  int start_id() const { return cell_id(map_.start_x, map_.start_y); }

 private:
  int cell_id(int x, int y) const;
  Eigen::VectorXd encode(int agent_x, int agent_y) const;
  void rebuild_index();
  void maybe_switch();

  GridMap map_;
  bool ignore_goal_;
  std::optional<NonStationarySchedule> schedule_;
  bool switched_ = false;

  std::vector<std::pair<int, int>> open_cells_;  // id -> (x, y)
  std::vector<int> cell_to_id_;                  // flat (y*w+x) -> id or -1

  int agent_x_ = -1, agent_y_ = -1;
  int episode_cap_ = kEpisodeCap;
  int episode_steps_ = 0;
  bool done_ = true;
  long long global_steps_ = 0;
};

// Factory. Known names: nine_rooms, maze, rubiks2x2, nine_rooms_goal_switch,
// nine_rooms_topology_switch, two_rooms. Unknown names throw ConfigError.
std::unique_ptr<Environment> make_env(const std::string& name, std::uint64_t seed,
                                      bool tabular = true, bool ignore_goal = false);

// Built-in map text by name (the shipped maps/ files carry the same content).
const std::string& builtin_map_text(const std::string& name);

}  // namespace laprl
