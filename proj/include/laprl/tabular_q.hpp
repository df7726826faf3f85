#pragma once

#include <Eigen/Core>

#include "laprl/rng.hpp"

namespace laprl {

// Plain tabular Q-learning.
class TabularQ {
 public:
  TabularQ(int num_states, int num_actions, double step_size, double discount);

  // Q(s,a) += alpha * [r + gamma * max_a' Q(s',a') * (1-done) - Q(s,a)]
  void update(int s, int a, double r, int s_next, bool done);

  // Uniform among maximizers.
  int greedy_action(int s, RngStream& rng) const;
  double max_value(int s) const { return table_.row(s).maxCoeff(); }
  double value(int s, int a) const { return table_(s, a); }
  Eigen::MatrixXd& table() { return table_; }
  const Eigen::MatrixXd& table() const { return table_; }

  double step_size() const { return alpha_; }
  void set_step_size(double a) { alpha_ = a; }
  double discount() const { return gamma_; }
  int num_actions() const { return static_cast<int>(table_.cols()); }

 private:
  Eigen::MatrixXd table_;
  double alpha_, gamma_;
};

}  // namespace laprl
