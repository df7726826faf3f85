#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "laprl/baselines.hpp"
#include "laprl/deep_q.hpp"
#include "laprl/environment.hpp"
#include "laprl/laplacian.hpp"
#include "laprl/laplacian_repr.hpp"
#include "laprl/tabular_q.hpp"

namespace laprl {

enum class Algorithm {
  kRandom,
  kQLearning,      // tabular epsilon-greedy Q-learning
  kCeoTabular,     // covering eigenoptions with the exact spectral oracle
  kDdqn,           // n-step Double DQN, epsilon-greedy
  kDceoOnline,     // fully online deep covering eigenoptions
  kDceoTwoPhased,  // discovery phase, then frozen options
  kCounts,         // DDQN + perfect-count bonus
  kRnd,            // DDQN + prediction-error bonus
  kEzGreedy,       // DDQN + zeta-distributed action repetition
};

Algorithm parse_algorithm(const std::string& name);
bool algorithm_is_tabular(Algorithm a);

// Everything a controller needs; materialized from the run config.
struct ControllerConfig {
  Algorithm algorithm = Algorithm::kDdqn;
  long long total_steps = 0;

  // shared
  double gamma = 0.99;
  double epsilon_final = 0.1;
  double epsilon_decay_frac = 0.1;  // linear 1.0 -> final over this fraction

  // options
  int num_options = 10;
  double mu = 0.7;
  int option_duration = 10;  // D
  double epsilon_option = 0.01;
  long long t_discovery = 0;

  // deep learners
  std::vector<int> hidden_widths = {256, 256};
  double learning_rate = 1e-4;
  int n_step = 5;
  int batch_size = 32;
  size_t buffer_capacity = 100000;
  int sync_period = 1000;
  int train_interval = 1;
  size_t min_buffer_size = 500;
  bool resample_per_learner = false;

  // representation
  int repr_d = 0;  // 0 -> num_options
  double repr_beta = 2.0;
  double repr_lr = 1e-4;

  // tabular
  double alpha = 0.1;
  double option_gamma = 0.99;
  double option_vi_residual = 1e-6;
  int option_vi_max_sweeps = 1000;

  // baselines
  double count_bonus_scale = 0.1;
  double rnd_bonus_scale = 0.5;
  double zeta_k = 2.0;
  int zeta_cap = kEpisodeCap;
};

// Instrumentation: called with every reward a learner is trained on.
// learner is "main", "option", or "repr".
using RewardTap = std::function<void(std::string_view learner, double reward)>;

class Agent {
 public:
  virtual ~Agent() = default;
  virtual int act(const EnvState& s) = 0;
  virtual void observe(const EnvState& s, int action, const StepOutcome& out) = 0;
  virtual void begin_episode(const EnvState& s) { (void)s; }
  virtual std::optional<double> last_main_loss() const { return std::nullopt; }
  virtual std::optional<double> last_repr_loss() const { return std::nullopt; }
  virtual const LaplacianRepr* repr() const { return nullptr; }
  virtual int active_option() const { return -1; }
  virtual void set_reward_tap(RewardTap tap) { (void)tap; }
};

std::unique_ptr<Agent> make_agent(const ControllerConfig& cfg, const Environment& env,
                                  std::uint64_t seed);

// --- concrete controllers ---

class RandomAgent : public Agent {
 public:
  RandomAgent(int num_actions, std::uint64_t seed)
      : num_actions_(num_actions), rng_(RngStream::derive(seed, "action")) {}
  int act(const EnvState&) override { return rng_.uniform_int(num_actions_); }
  void observe(const EnvState&, int, const StepOutcome&) override {}

 private:
  int num_actions_;
  RngStream rng_;
};

class TabularQAgent : public Agent {
 public:
  TabularQAgent(const ControllerConfig& cfg, const Environment& env, std::uint64_t seed);
  int act(const EnvState& s) override;
  void observe(const EnvState& s, int action, const StepOutcome& out) override;
  TabularQ& q() { return q_; }

 private:
  ControllerConfig cfg_;
  TabularQ q_;
  RngStream action_rng_;
};

// Tabular covering eigenoptions. Rebuilds the spectral oracle from all
// transitions seen so far at every episode end during discovery, replacing
// the whole option set; options terminate where max_a q_i(s,a) <= 0.
class CeoTabularAgent : public Agent {
 public:
  CeoTabularAgent(const ControllerConfig& cfg, const Environment& env, std::uint64_t seed);
  int act(const EnvState& s) override;
  void observe(const EnvState& s, int action, const StepOutcome& out) override;
  void begin_episode(const EnvState& s) override;
  int active_option() const override { return option_; }

  int rebuild_count() const { return rebuilds_; }
  const Eigen::MatrixXd& option_values(int i) const { return option_q_[i]; }

 private:
  void rebuild_options();
  bool option_terminates(int i, int s) const { return option_q_[i].row(s).maxCoeff() <= 0.0; }
  int option_action(int i, int s);

  ControllerConfig cfg_;
  const Environment& env_;
  TabularQ main_;
  RngStream action_rng_;

  // empirical model of everything seen so far
  std::vector<std::pair<int, int>> edges_;
  std::map<std::pair<int, int>, std::map<int, int>> successor_counts_;  // (s,a) -> s' -> n
  std::vector<char> visited_;

  std::vector<Eigen::MatrixXd> option_q_;  // N tables, |S| x |A|
  int option_ = -1;
  long long t_ = 0;
  int rebuilds_ = 0;
};

// Deep controller: DDQN plus optional covering eigenoptions (online or
// two-phased) or an exploration-bonus baseline, all over one replay buffer.
class DeepController : public Agent {
 public:
  DeepController(const ControllerConfig& cfg, const Environment& env, std::uint64_t seed);

  int act(const EnvState& s) override;
  void observe(const EnvState& s, int action, const StepOutcome& out) override;
  void begin_episode(const EnvState& s) override;

  std::optional<double> last_main_loss() const override { return last_main_loss_; }
  std::optional<double> last_repr_loss() const override { return last_repr_loss_; }
  const LaplacianRepr* repr() const override { return repr_ ? &*repr_ : nullptr; }
  int active_option() const override { return option_; }
  void set_reward_tap(RewardTap tap) override { tap_ = std::move(tap); }

  double current_epsilon() const;
  const DeepQ& main() const { return main_; }
  const std::vector<DeepQ>& options() const { return options_; }
  long long step_count() const { return t_; }
  // lengths of naturally terminated option executions (interruptions excluded)
  const std::vector<int>& option_durations() const { return option_durations_; }

 private:
  bool options_enabled() const { return !options_.empty(); }
  // Called from train_step, where t_ already names the just-completed step;
  // the boundary step itself still belongs to the discovery phase.
  bool in_discovery() const {
    return cfg_.algorithm == Algorithm::kDceoTwoPhased && t_ <= cfg_.t_discovery;
  }
  int option_action(int i, const Eigen::VectorXd& features);
  void train_step();

  ControllerConfig cfg_;
  int num_actions_;
  RngStream action_rng_, train_rng_, repr_rng_;

  ReplayBuffer buffer_;
  DeepQ main_;
  std::vector<DeepQ> options_;
  std::optional<LaplacianRepr> repr_;

  std::optional<CountTable> counts_;
  std::optional<RndPair> rnd_;
  int ez_remaining_ = 0;
  int ez_action_ = -1;

  int option_ = -1;
  bool terminated_ = true;
  int option_steps_ = 0;
  std::vector<int> option_durations_;
  long long t_ = 0;
  std::optional<double> last_main_loss_, last_repr_loss_;
  RewardTap tap_;
};

}  // namespace laprl
