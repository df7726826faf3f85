#include "laprl/environment.hpp"

#include "laprl/cube.hpp"
#include "laprl/error.hpp"

namespace laprl {

GridWorldEnv::GridWorldEnv(GridMap map, bool ignore_goal)
    : map_(std::move(map)), ignore_goal_(ignore_goal) {
  map_.validate();
  rebuild_index();
}

void GridWorldEnv::rebuild_index() {
  open_cells_.clear();
  cell_to_id_.assign(map_.cells.size(), -1);
  for (int y = 0; y < map_.height; ++y) {
    for (int x = 0; x < map_.width; ++x) {
      if (!map_.wall(x, y)) {
        cell_to_id_[static_cast<size_t>(y) * map_.width + x] =
            static_cast<int>(open_cells_.size());
        open_cells_.emplace_back(x, y);
      }
    }
  }
}

int GridWorldEnv::cell_id(int x, int y) const {
  return cell_to_id_[static_cast<size_t>(y) * map_.width + x];
}

Eigen::VectorXd GridWorldEnv::encode(int agent_x, int agent_y) const {
  // Grayscale: wall 0.0, floor 0.5, agent 1.0. The goal is invisible.
  Eigen::VectorXd v(feature_dim());
  for (int y = 0; y < map_.height; ++y)
    for (int x = 0; x < map_.width; ++x)
      v[y * map_.width + x] = map_.wall(x, y) ? 0.0 : 0.5;
  v[agent_y * map_.width + agent_x] = 1.0;
  return v;
}

void GridWorldEnv::set_schedule(NonStationarySchedule schedule) {
  if (schedule.after.width != map_.width || schedule.after.height != map_.height)
    throw ConfigError("non-stationary switch must preserve observation dimensions");
  schedule.after.validate();
  schedule_ = std::move(schedule);
  switched_ = false;
}

void GridWorldEnv::maybe_switch() {
  if (!switched_ && schedule_ && schedule_->switch_step >= 0 &&
      global_steps_ >= schedule_->switch_step) {
    map_ = schedule_->after;
    rebuild_index();
    switched_ = true;
  }
}

EnvState GridWorldEnv::reset() {
  maybe_switch();
  agent_x_ = map_.start_x;
  agent_y_ = map_.start_y;
  episode_steps_ = 0;
  done_ = false;
  return {cell_id(agent_x_, agent_y_), encode(agent_x_, agent_y_)};
}

StepOutcome GridWorldEnv::step(int action, RngStream& rng) {
  if (done_) throw UsageError("step() after episode end");
  if (action < 0 || action >= num_actions()) throw UsageError("bad action index");

  int executed = action;
  bool overwritten = rng.uniform() < kActionOverwriteProb;
  if (overwritten) executed = rng.uniform_int(num_actions());

  const int dx[4] = {0, 0, -1, 1};
  const int dy[4] = {-1, 1, 0, 0};
  int nx = agent_x_ + dx[executed];
  int ny = agent_y_ + dy[executed];
  if (!map_.wall(nx, ny)) {
    agent_x_ = nx;
    agent_y_ = ny;
  }
  ++episode_steps_;
  ++global_steps_;

  StepOutcome out;
  out.executed_action = executed;
  out.overwritten = overwritten;
  out.next_state = {cell_id(agent_x_, agent_y_), encode(agent_x_, agent_y_)};
  bool goal = !ignore_goal_ && map_.is_goal(agent_x_, agent_y_);
  out.reward = goal ? 1.0 : 0.0;
  out.truncated = !goal && episode_steps_ >= episode_cap_;
  out.episode_end = goal || out.truncated;
  done_ = out.episode_end;
  return out;
}

void GridWorldEnv::set_episode_cap(int cap) {
  if (cap < 1) throw ConfigError("episode cap must be >= 1");
  episode_cap_ = cap;
}

std::vector<EnvState> GridWorldEnv::enumerate_states() const {
  std::vector<EnvState> all;
  all.reserve(open_cells_.size());
  for (int id = 0; id < num_states(); ++id) all.push_back(state(id));
  return all;
}

EnvState GridWorldEnv::state(int tabular_id) const {
  if (tabular_id < 0 || tabular_id >= num_states()) throw UsageError("bad tabular_id");
  auto [x, y] = open_cells_[tabular_id];
  return {tabular_id, encode(x, y)};
}

int GridWorldEnv::skeleton_next(int tabular_id, int action) const {
  auto [x, y] = open_cells_[tabular_id];
  const int dx[4] = {0, 0, -1, 1};
  const int dy[4] = {-1, 1, 0, 0};
  int nx = x + dx[action], ny = y + dy[action];
  if (map_.wall(nx, ny)) return tabular_id;
  return cell_id(nx, ny);
}

std::optional<std::pair<int, int>> GridWorldEnv::state_coords(int tabular_id) const {
  return open_cells_[tabular_id];
}

std::unique_ptr<Environment> make_env(const std::string& name, std::uint64_t seed,
                                      bool tabular, bool ignore_goal) {
  (void)seed;  // all envs are deterministic up to the rng passed to step()
  if (name == "rubiks2x2") return std::make_unique<CubeEnv>(tabular ? 3 : 5);
  if (name == "nine_rooms" || name == "maze" || name == "two_rooms") {
    return std::make_unique<GridWorldEnv>(GridMap::parse(builtin_map_text(name), name),
                                          ignore_goal);
  }
  if (name == "nine_rooms_goal_switch" || name == "nine_rooms_topology_switch") {
    auto env = std::make_unique<GridWorldEnv>(
        GridMap::parse(builtin_map_text("nine_rooms"), name), ignore_goal);
    // The switch step itself comes from the run config; a placeholder schedule
    // is installed here so the after-map is validated up front.
    NonStationarySchedule sched;
    sched.switch_step = -1;
    const std::string after = name == "nine_rooms_goal_switch"
                                  ? "nine_rooms_after_goal"
                                  : "nine_rooms_after_topology";
    sched.after = GridMap::parse(builtin_map_text(after), after);
    env->set_schedule(std::move(sched));
    return env;
  }
  throw ConfigError("unknown environment: " + name);
}

}  // namespace laprl
