#pragma once

#include <vector>

#include "laprl/mlp.hpp"
#include "laprl/rng.hpp"

namespace laprl {

// Perfect per-state visit counts with a 1/sqrt(n) bonus.
class CountTable {
 public:
  CountTable(int num_states, double bonus_scale);

  void record_visit(int s) { ++counts_[s]; }
  long long count(int s) const { return counts_[s]; }

  // bonus = scale / sqrt(n(s)); querying an unvisited state is a usage error.
  double bonus(int s) const;

 private:
  std::vector<long long> counts_;
  double scale_;
};

// Duration sampler for ez-greedy action repetition: P(n) proportional to
// n^{-k} on [1, cap]. cap == 1 returns 1 without consuming the rng.
int ez_sample_duration(RngStream& rng, double k, int cap);

// Exact mean of the truncated zeta distribution (test oracle lives with the
// sampler since both are closed-form).
double ez_truncated_zeta_mean(double k, int cap);

// Random network distillation: frozen random target, trained predictor;
// bonus is the scaled squared prediction error.
class RndPair {
 public:
  RndPair(std::vector<int> widths, double bonus_scale, double step_size,
          RngStream& target_rng, RngStream& predictor_rng);

  // Returns the bonus for this state and takes one predictor step toward the
  // target's output on it.
  double bonus_and_train(const Eigen::VectorXd& features);

  double bonus(const Eigen::VectorXd& features) const;
  const Mlp& target() const { return target_; }
  const Mlp& predictor() const { return predictor_; }
  Mlp& predictor() { return predictor_; }

 private:
  Mlp target_;
  Mlp predictor_;
  Adam adam_;
  double scale_;
};

}  // namespace laprl
