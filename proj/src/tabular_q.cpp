#include "laprl/tabular_q.hpp"

#include "laprl/error.hpp"

namespace laprl {

TabularQ::TabularQ(int num_states, int num_actions, double step_size, double discount)
    : table_(Eigen::MatrixXd::Zero(num_states, num_actions)),
      alpha_(step_size),
      gamma_(discount) {}

void TabularQ::update(int s, int a, double r, int s_next, bool done) {
  if (s < 0 || s >= table_.rows() || a < 0 || a >= table_.cols() || s_next < 0 ||
      s_next >= table_.rows())
    throw UsageError("tabular update: index out of range");
  double target = r + (done ? 0.0 : gamma_ * table_.row(s_next).maxCoeff());
  table_(s, a) += alpha_ * (target - table_(s, a));
}

int TabularQ::greedy_action(int s, RngStream& rng) const {
  double best = table_.row(s).maxCoeff();
  int ties = 0;
  int pick = 0;
  for (int a = 0; a < table_.cols(); ++a) {
    if (table_(s, a) == best) {
      ++ties;
      // reservoir of size 1 over the maximizers
      if (rng.uniform_int(ties) == 0) pick = a;
    }
  }
  return pick;
}

}  // namespace laprl
