#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "laprl/environment.hpp"

namespace laprl {

// 2x2 Rubik's cube with the DLB corner held fixed, so the move set is
// 9 moves = {U, R, F} x {CW, CCW, half}. State = 24 sticker colors.
// The reachable set is restricted to states within max_depth moves of
// solved; moves that would leave the restricted set are no-ops.
class CubeEnv : public Environment {
 public:
  using Stickers = std::array<std::uint8_t, 24>;

  explicit CubeEnv(int max_depth);

  int num_actions() const override { return 9; }
  int num_states() const override { return static_cast<int>(states_.size()); }
  int feature_dim() const override { return 24 * 6; }
  const std::string& name() const override { return name_; }

  EnvState reset() override;
  StepOutcome step(int action, RngStream& rng) override;

  std::vector<EnvState> enumerate_states() const override;
  EnvState state(int tabular_id) const override;
  int skeleton_next(int tabular_id, int action) const override;

  int episode_step_count() const override { return episode_steps_; }
  bool episode_done() const override { return done_; }
  long long global_step_count() const override { return global_steps_; }
  void set_episode_cap(int cap) override;

  // Sticker-level move application, exposed for tests.
  static Stickers apply_move(const Stickers& s, int move);
  static int inverse_move(int move);
  static Stickers solved_state();

  int solved_id() const { return 0; }
  int start_id() const { return start_id_; }
  int depth(int tabular_id) const { return depths_[tabular_id]; }

 private:
  Eigen::VectorXd encode(const Stickers& s) const;

  std::string name_ = "rubiks2x2";
  int max_depth_;
  std::vector<Stickers> states_;  // BFS order from solved; id 0 = solved
  std::vector<int> depths_;
  std::unordered_map<std::uint64_t, int> index_;  // packed stickers -> id
  std::vector<std::array<int, 9>> skeleton_;      // id x move -> id (no-op if outside)
  int start_id_ = -1;                             // first BFS state at max_depth

  int cur_id_ = -1;
  int episode_cap_ = kEpisodeCap;
  int episode_steps_ = 0;
  bool done_ = true;
  long long global_steps_ = 0;
};

}  // namespace laprl
