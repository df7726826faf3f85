#pragma once

#include <functional>

#include "laprl/mlp.hpp"
#include "laprl/replay_buffer.hpp"

namespace laprl {

// n-step Double DQN learner: online net selects the bootstrap action, target
// net evaluates it. Target syncs every sync_period update calls.
class DeepQ {
 public:
  DeepQ(std::vector<int> widths, double step_size, int n, double discount,
        int sync_period, RngStream& init_rng);

  // Per-step reward override, e.g. eigenfunction differences for options.
  // Receives the transition; nullptr means use the stored extrinsic reward.
  using RewardFn = std::function<double(const Transition&)>;

  double nstep_target(const Segment& seg, const RewardFn& reward = nullptr) const;

  // One semi-gradient Adam step on mean squared (Y - Q(s,a)). Returns td loss.
  double update(const std::vector<Segment>& batch, const RewardFn& reward = nullptr);

  int greedy_action(const Eigen::VectorXd& features) const;
  Eigen::VectorXd q_values(const Eigen::VectorXd& features) const;

  const Mlp& online() const { return online_; }
  const Mlp& target() const { return target_; }
  Mlp& online() { return online_; }
  Mlp& target() { return target_; }
  int n() const { return n_; }
  double discount() const { return gamma_; }
  long long update_count() const { return updates_; }

 private:
  Mlp online_;
  Mlp target_;
  Adam adam_;
  int n_;
  double gamma_;
  int sync_period_;
  long long updates_ = 0;
};

}  // namespace laprl
