#include "laprl/controller.hpp"

#include <algorithm>
#include <cmath>

#include "laprl/error.hpp"

namespace laprl {

Algorithm parse_algorithm(const std::string& name) {
  if (name == "random") return Algorithm::kRandom;
  if (name == "q_learning") return Algorithm::kQLearning;
  if (name == "ceo") return Algorithm::kCeoTabular;
  if (name == "ddqn") return Algorithm::kDdqn;
  if (name == "dceo_online") return Algorithm::kDceoOnline;
  if (name == "dceo_two_phased") return Algorithm::kDceoTwoPhased;
  if (name == "counts") return Algorithm::kCounts;
  if (name == "rnd") return Algorithm::kRnd;
  if (name == "ez_greedy") return Algorithm::kEzGreedy;
  throw ConfigError("unknown algorithm: " + name);
}

bool algorithm_is_tabular(Algorithm a) {
  return a == Algorithm::kRandom || a == Algorithm::kQLearning || a == Algorithm::kCeoTabular;
}

std::unique_ptr<Agent> make_agent(const ControllerConfig& cfg, const Environment& env,
                                  std::uint64_t seed) {
  switch (cfg.algorithm) {
    case Algorithm::kRandom:
      return std::make_unique<RandomAgent>(env.num_actions(), seed);
    case Algorithm::kQLearning:
      return std::make_unique<TabularQAgent>(cfg, env, seed);
    case Algorithm::kCeoTabular:
      return std::make_unique<CeoTabularAgent>(cfg, env, seed);
    default:
      return std::make_unique<DeepController>(cfg, env, seed);
  }
}

// ---------------------------------------------------------------- tabular Q

TabularQAgent::TabularQAgent(const ControllerConfig& cfg, const Environment& env,
                             std::uint64_t seed)
    : cfg_(cfg),
      q_(env.num_states(), env.num_actions(), cfg.alpha, cfg.gamma),
      action_rng_(RngStream::derive(seed, "action")) {}

int TabularQAgent::act(const EnvState& s) {
  if (action_rng_.uniform() < cfg_.epsilon_final)
    return action_rng_.uniform_int(q_.num_actions());
  return q_.greedy_action(s.tabular_id, action_rng_);
}

void TabularQAgent::observe(const EnvState& s, int action, const StepOutcome& out) {
  bool done = out.episode_end && !out.truncated;
  q_.update(s.tabular_id, action, out.reward, out.next_state.tabular_id, done);
}

// ------------------------------------------------------------- tabular CEO

CeoTabularAgent::CeoTabularAgent(const ControllerConfig& cfg, const Environment& env,
                                 std::uint64_t seed)
    : cfg_(cfg),
      env_(env),
      main_(env.num_states(), env.num_actions(), cfg.alpha, cfg.gamma),
      action_rng_(RngStream::derive(seed, "action")),
      visited_(env.num_states(), 0) {
  option_q_.assign(cfg_.num_options,
                   Eigen::MatrixXd::Zero(env.num_states(), env.num_actions()));
}

void CeoTabularAgent::begin_episode(const EnvState& s) {
  visited_[s.tabular_id] = 1;
  option_ = -1;
}

int CeoTabularAgent::option_action(int i, int s) {
  if (action_rng_.uniform() < cfg_.epsilon_option)
    return action_rng_.uniform_int(env_.num_actions());
  // greedy on the option's value table, uniform among maximizers
  const auto row = option_q_[i].row(s);
  double best = row.maxCoeff();
  int ties = 0, pick = 0;
  for (int a = 0; a < row.size(); ++a) {
    if (row[a] == best && action_rng_.uniform_int(++ties) == 0) pick = a;
  }
  return pick;
}

int CeoTabularAgent::act(const EnvState& s) {
  if (option_ >= 0) {
    if (option_terminates(option_, s.tabular_id)) {
      option_ = -1;
    } else {
      return option_action(option_, s.tabular_id);
    }
  }
  double eps = t_ < cfg_.t_discovery ? 1.0 : cfg_.epsilon_final;
  if (action_rng_.uniform() < eps) {
    if (cfg_.num_options > 0 && cfg_.mu > 0 && action_rng_.uniform() < cfg_.mu) {
      int o = action_rng_.uniform_int(cfg_.num_options);
      if (!option_terminates(o, s.tabular_id)) {
        option_ = o;
        return option_action(option_, s.tabular_id);
      }
    }
    option_ = -1;
    return action_rng_.uniform_int(env_.num_actions());
  }
  option_ = -1;
  return main_.greedy_action(s.tabular_id, action_rng_);
}

void CeoTabularAgent::observe(const EnvState& s, int action, const StepOutcome& out) {
  ++t_;
  (void)action;
  int s_id = s.tabular_id;
  int s2_id = out.next_state.tabular_id;
  visited_[s2_id] = 1;
  if (s_id != s2_id) edges_.emplace_back(s_id, s2_id);
  // model keyed by the action that was actually applied
  ++successor_counts_[{s_id, out.executed_action}][s2_id];

  if (t_ > cfg_.t_discovery) {
    bool done = out.episode_end && !out.truncated;
    main_.update(s_id, action, out.reward, s2_id, done);
  }
  if (out.episode_end) {
    option_ = -1;
    if (t_ <= cfg_.t_discovery) rebuild_options();
  }
}

void CeoTabularAgent::rebuild_options() {
  // Compact the visited subgraph.
  std::vector<int> to_compact(env_.num_states(), -1);
  std::vector<int> from_compact;
  for (int s = 0; s < env_.num_states(); ++s) {
    if (visited_[s]) {
      to_compact[s] = static_cast<int>(from_compact.size());
      from_compact.push_back(s);
    }
  }
  const int nv = static_cast<int>(from_compact.size());
  if (nv < 2) return;

  std::vector<std::pair<int, int>> compact_edges;
  compact_edges.reserve(edges_.size());
  for (auto [a, b] : edges_) compact_edges.emplace_back(to_compact[a], to_compact[b]);

  GraphLaplacian lap = laplacian_from_edges(nv, compact_edges);
  int d = std::min(cfg_.num_options + 1, nv);
  EigenSystem eig = eigendecompose(lap, d, 0);
  ++rebuilds_;

  // Replace the whole option set: option i follows eigenfunction i+1
  // (the constant e_1 yields zero reward everywhere, so it is skipped).
  const double gamma = cfg_.option_gamma;
  for (int i = 0; i < cfg_.num_options; ++i) {
    auto& q = option_q_[i];
    q.setZero();
    if (i + 1 >= d) continue;
    Eigen::VectorXd e = eig.eigenfunctions.col(i + 1);

    // Value iteration on the empirical model, with the termination-aware
    // backup: a terminated option collects no further reward.
    for (int sweep = 0; sweep < cfg_.option_vi_max_sweeps; ++sweep) {
      double residual = 0.0;
      for (const auto& [key, succ] : successor_counts_) {
        auto [s, a] = key;
        // most frequently observed successor
        int s2 = succ.begin()->first;
        int best_n = succ.begin()->second;
        for (const auto& [cand, n] : succ) {
          if (n > best_n) {
            s2 = cand;
            best_n = n;
          }
        }
        double r = e[to_compact[s2]] - e[to_compact[s]];
        double v_next = std::max(0.0, q.row(s2).maxCoeff());
        double updated = r + gamma * v_next;
        residual = std::max(residual, std::abs(updated - q(s, a)));
        q(s, a) = updated;
      }
      if (residual < cfg_.option_vi_residual) break;
    }
  }
}

// ----------------------------------------------------------- deep controller

DeepController::DeepController(const ControllerConfig& cfg, const Environment& env,
                               std::uint64_t seed)
    : cfg_(cfg),
      num_actions_(env.num_actions()),
      action_rng_(RngStream::derive(seed, "action")),
      train_rng_(RngStream::derive(seed, "train")),
      repr_rng_(RngStream::derive(seed, "repr")),
      buffer_(cfg.buffer_capacity),
      main_([&] {
        std::vector<int> widths{env.feature_dim()};
        widths.insert(widths.end(), cfg.hidden_widths.begin(), cfg.hidden_widths.end());
        widths.push_back(env.num_actions());
        RngStream init = RngStream::substream(seed, "init.main");
        return DeepQ(widths, cfg.learning_rate, cfg.n_step, cfg.gamma, cfg.sync_period, init);
      }()) {
  const bool dceo = cfg_.algorithm == Algorithm::kDceoOnline ||
                    cfg_.algorithm == Algorithm::kDceoTwoPhased;
  if (dceo && cfg_.num_options > 0) {
    std::vector<int> widths{env.feature_dim()};
    widths.insert(widths.end(), cfg_.hidden_widths.begin(), cfg_.hidden_widths.end());
    widths.push_back(env.num_actions());
    for (int i = 0; i < cfg_.num_options; ++i) {
      RngStream init = RngStream::substream(seed, "init.option" + std::to_string(i));
      options_.emplace_back(widths, cfg_.learning_rate, cfg_.n_step, cfg_.gamma,
                            cfg_.sync_period, init);
    }
    int d = cfg_.repr_d > 0 ? cfg_.repr_d : cfg_.num_options;
    std::vector<int> repr_widths{env.feature_dim()};
    repr_widths.insert(repr_widths.end(), cfg_.hidden_widths.begin(), cfg_.hidden_widths.end());
    repr_widths.push_back(d);
    RngStream init = RngStream::substream(seed, "init.repr");
    repr_.emplace(repr_widths, cfg_.repr_beta, cfg_.repr_lr, init);
  }
  if (cfg_.algorithm == Algorithm::kCounts) {
    counts_.emplace(env.num_states(), cfg_.count_bonus_scale);
  }
  if (cfg_.algorithm == Algorithm::kRnd) {
    std::vector<int> widths{env.feature_dim()};
    widths.insert(widths.end(), cfg_.hidden_widths.begin(), cfg_.hidden_widths.end());
    widths.push_back(std::max(8, cfg_.hidden_widths.back() / 4));
    RngStream target = RngStream::substream(seed, "init.rnd_target");
    RngStream pred = RngStream::substream(seed, "init.rnd_predictor");
    rnd_.emplace(widths, cfg_.rnd_bonus_scale, cfg_.learning_rate, target, pred);
  }
}

double DeepController::current_epsilon() const {
  if (cfg_.algorithm == Algorithm::kDceoTwoPhased) {
    if (t_ < cfg_.t_discovery) return 1.0;
    double window = cfg_.epsilon_decay_frac * static_cast<double>(cfg_.total_steps);
    if (window <= 0) return cfg_.epsilon_final;
    double frac = static_cast<double>(t_ - cfg_.t_discovery) / window;
    return std::max(cfg_.epsilon_final, 1.0 - (1.0 - cfg_.epsilon_final) * frac);
  }
  double window = cfg_.epsilon_decay_frac * static_cast<double>(cfg_.total_steps);
  if (window <= 0) return cfg_.epsilon_final;
  double frac = static_cast<double>(t_) / window;
  return std::max(cfg_.epsilon_final, 1.0 - (1.0 - cfg_.epsilon_final) * frac);
}

int DeepController::option_action(int i, const Eigen::VectorXd& features) {
  // near-greedy intra-option policy
  if (action_rng_.uniform() < cfg_.epsilon_option) return action_rng_.uniform_int(num_actions_);
  return options_[i].greedy_action(features);
}

void DeepController::begin_episode(const EnvState& s) {
  option_ = -1;
  terminated_ = true;
  ez_remaining_ = 0;
  option_steps_ = 0;
  if (counts_) counts_->record_visit(s.tabular_id);
}

int DeepController::act(const EnvState& s) {
  if (option_ >= 0 && !terminated_) {
    terminated_ = action_rng_.uniform() < 1.0 / cfg_.option_duration;
    if (!terminated_) {
      ++option_steps_;
      return option_action(option_, s.features);
    }
    option_durations_.push_back(option_steps_);  // natural termination
    option_steps_ = 0;
  }
  // ez-greedy repetition overrides the decision while it lasts
  if (ez_remaining_ > 0) {
    --ez_remaining_;
    return ez_action_;
  }
  option_ = -1;
  terminated_ = true;
  if (action_rng_.uniform() < current_epsilon()) {
    if (options_enabled() && cfg_.mu > 0) {
      if (action_rng_.uniform() < cfg_.mu) {
        option_ = action_rng_.uniform_int(static_cast<int>(options_.size()));
        terminated_ = false;
        option_steps_ = 1;
        return option_action(option_, s.features);
      }
    }
    if (cfg_.algorithm == Algorithm::kEzGreedy && cfg_.zeta_cap > 1) {
      int duration = ez_sample_duration(action_rng_, cfg_.zeta_k, cfg_.zeta_cap);
      ez_action_ = action_rng_.uniform_int(num_actions_);
      ez_remaining_ = duration - 1;
      return ez_action_;
    }
    return action_rng_.uniform_int(num_actions_);
  }
  return main_.greedy_action(s.features);
}

void DeepController::observe(const EnvState& s, int action, const StepOutcome& out) {
  ++t_;
  Transition tr;
  tr.s = s.features;
  tr.s_next = out.next_state.features;
  tr.action = action;
  tr.s_id = s.tabular_id;
  tr.s_next_id = out.next_state.tabular_id;
  tr.done = out.episode_end && !out.truncated;
  tr.boundary = out.episode_end;
  tr.reward = out.reward;
  if (counts_) {
    counts_->record_visit(out.next_state.tabular_id);
    tr.reward += counts_->bonus(out.next_state.tabular_id);
  }
  if (rnd_) tr.reward += rnd_->bonus_and_train(out.next_state.features);
  buffer_.push(std::move(tr));

  if (out.episode_end) {
    option_ = -1;
    terminated_ = true;
    ez_remaining_ = 0;
    option_steps_ = 0;  // interrupted execution: no duration recorded
  }
  if (t_ % cfg_.train_interval == 0 && buffer_.size() >= cfg_.min_buffer_size) train_step();
}

void DeepController::train_step() {
  auto batch = buffer_.sample_segments(cfg_.batch_size, cfg_.n_step, train_rng_);
  if (batch.empty()) return;

  const bool train_options = options_enabled() &&
                             (cfg_.algorithm == Algorithm::kDceoOnline || in_discovery());
  const bool train_main = cfg_.algorithm != Algorithm::kDceoTwoPhased || !in_discovery();

  if (train_options && repr_) {
    // One representation pass per sampled minibatch; option learners read this
    // frozen snapshot instead of racing on live parameters.
    std::vector<const Transition*> uniq;
    std::unordered_map<const Transition*, int> row_of;
    for (const auto& seg : batch) {
      for (const Transition* t : seg.steps) {
        if (row_of.emplace(t, static_cast<int>(uniq.size())).second) uniq.push_back(t);
      }
    }
    const int rows = static_cast<int>(uniq.size());
    Eigen::MatrixXd s_mat(rows, repr_->net().input_width());
    Eigen::MatrixXd s2_mat(rows, repr_->net().input_width());
    for (int i = 0; i < rows; ++i) {
      s_mat.row(i) = uniq[i]->s.transpose();
      s2_mat.row(i) = uniq[i]->s_next.transpose();
    }
    Eigen::MatrixXd f_s = repr_->values(s_mat);
    Eigen::MatrixXd f_s2 = repr_->values(s2_mat);

    for (size_t i = 0; i < options_.size(); ++i) {
      auto reward = [&](const Transition& t) {
        int row = row_of.at(&t);
        double r = f_s2(row, static_cast<int>(i)) - f_s(row, static_cast<int>(i));
        if (tap_) tap_("option", r);
        return r;
      };
      auto opt_batch = cfg_.resample_per_learner
                           ? buffer_.sample_segments(cfg_.batch_size, cfg_.n_step, train_rng_)
                           : batch;
      if (cfg_.resample_per_learner) {
        // fresh transitions are not in the snapshot; fall back to live values
        options_[i].update(opt_batch, [&](const Transition& t) {
          double r = repr_->values(t.s_next)[static_cast<int>(i)] -
                     repr_->values(t.s)[static_cast<int>(i)];
          if (tap_) tap_("option", r);
          return r;
        });
      } else {
        options_[i].update(opt_batch, reward);
      }
    }
  }
  if (train_options && repr_) {
    // Pairs come from the same shared minibatch; only aux states are fresh.
    std::vector<const Transition*> pairs;
    pairs.reserve(batch.size());
    for (const auto& seg : batch) pairs.push_back(seg.steps.front());
    last_repr_loss_ = repr_->train_step_on(pairs, buffer_, repr_rng_);
  }
  if (train_main) {
    auto main_batch = cfg_.resample_per_learner
                          ? buffer_.sample_segments(cfg_.batch_size, cfg_.n_step, train_rng_)
                          : batch;
    if (tap_) {
      last_main_loss_ = main_.update(main_batch, [&](const Transition& t) {
        tap_("main", t.reward);
        return t.reward;
      });
    } else {
      last_main_loss_ = main_.update(main_batch);
    }
  }
}

}  // namespace laprl
