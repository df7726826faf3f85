#include "laprl/deep_q.hpp"

#include <cmath>

#include "laprl/error.hpp"

namespace laprl {

DeepQ::DeepQ(std::vector<int> widths, double step_size, int n, double discount,
             int sync_period, RngStream& init_rng)
    : online_(std::move(widths), init_rng),
      target_(online_),
      adam_(online_, step_size),
      n_(n),
      gamma_(discount),
      sync_period_(sync_period) {
  if (n_ < 1) throw UsageError("n-step horizon must be >= 1");
  if (sync_period_ < 1) throw UsageError("sync period must be >= 1");
}

double DeepQ::nstep_target(const Segment& seg, const RewardFn& reward) const {
  if (seg.steps.empty()) throw UsageError("nstep_target: empty segment");
  double y = 0.0;
  double g = 1.0;
  for (const Transition* t : seg.steps) {
    y += g * (reward ? reward(*t) : t->reward);
    g *= gamma_;
  }
  const Transition& last = *seg.steps.back();
  if (!last.done) {
    // Double DQN split: argmax under the online net, value under the target.
    Eigen::RowVectorXd online_q = online_.forward(last.s_next.transpose());
    int best = 0;
    online_q.maxCoeff(&best);
    Eigen::RowVectorXd target_q = target_.forward(last.s_next.transpose());
    y += g * target_q[best];
  }
  return y;
}

double DeepQ::update(const std::vector<Segment>& batch, const RewardFn& reward) {
  if (batch.empty()) throw UsageError("deep update: empty minibatch");
  const int m = static_cast<int>(batch.size());

  Eigen::MatrixXd states(m, online_.input_width());
  Eigen::VectorXd targets(m);
  for (int i = 0; i < m; ++i) {
    states.row(i) = batch[i].steps.front()->s.transpose();
    targets[i] = nstep_target(batch[i], reward);
  }

  Mlp::Cache cache;
  Eigen::MatrixXd q = online_.forward(states, cache);
  Eigen::MatrixXd upstream = Eigen::MatrixXd::Zero(m, online_.output_width());
  double loss = 0.0;
  for (int i = 0; i < m; ++i) {
    int a = batch[i].steps.front()->action;
    double err = q(i, a) - targets[i];
    loss += err * err;
    upstream(i, a) = 2.0 * err / m;  // d(mean squared error)/dQ
  }
  loss /= m;
  if (!std::isfinite(loss)) throw TrainingError("deep update: non-finite td loss");

  adam_.step(online_, online_.backward(cache, upstream));
  ++updates_;
  if (updates_ % sync_period_ == 0) target_ = online_;
  return loss;
}

int DeepQ::greedy_action(const Eigen::VectorXd& features) const {
  Eigen::RowVectorXd q = online_.forward(features.transpose());
  int best = 0;
  q.maxCoeff(&best);
  return best;
}

Eigen::VectorXd DeepQ::q_values(const Eigen::VectorXd& features) const {
  return online_.forward(features.transpose()).transpose();
}

}  // namespace laprl
