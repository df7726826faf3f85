#include "laprl/baselines.hpp"

#include <cmath>

#include "laprl/error.hpp"

namespace laprl {

CountTable::CountTable(int num_states, double bonus_scale)
    : counts_(num_states, 0), scale_(bonus_scale) {}

double CountTable::bonus(int s) const {
  if (counts_[s] == 0) throw UsageError("count bonus queried for an unvisited state");
  return scale_ / std::sqrt(static_cast<double>(counts_[s]));
}

int ez_sample_duration(RngStream& rng, double k, int cap) {
  if (cap < 1) throw UsageError("ez duration cap must be >= 1");
  if (cap == 1) return 1;
  double z = 0.0;
  for (int n = 1; n <= cap; ++n) z += std::pow(static_cast<double>(n), -k);
  double u = rng.uniform() * z;
  double acc = 0.0;
  for (int n = 1; n <= cap; ++n) {
    acc += std::pow(static_cast<double>(n), -k);
    if (u < acc) return n;
  }
  return cap;
}

double ez_truncated_zeta_mean(double k, int cap) {
  double z = 0.0, num = 0.0;
  for (int n = 1; n <= cap; ++n) {
    double p = std::pow(static_cast<double>(n), -k);
    z += p;
    num += n * p;
  }
  return num / z;
}

RndPair::RndPair(std::vector<int> widths, double bonus_scale, double step_size,
                 RngStream& target_rng, RngStream& predictor_rng)
    : target_(widths, target_rng),
      predictor_(std::move(widths), predictor_rng),
      adam_(predictor_, step_size),
      scale_(bonus_scale) {}

double RndPair::bonus(const Eigen::VectorXd& features) const {
  Eigen::RowVectorXd err =
      predictor_.forward(features.transpose()) - target_.forward(features.transpose());
  return scale_ * err.squaredNorm();
}

double RndPair::bonus_and_train(const Eigen::VectorXd& features) {
  Eigen::RowVectorXd y = target_.forward(features.transpose());
  Mlp::Cache cache;
  Eigen::RowVectorXd p = predictor_.forward(features.transpose(), cache);
  Eigen::RowVectorXd err = p - y;
  double b = scale_ * err.squaredNorm();
  if (!std::isfinite(b)) throw TrainingError("RND: non-finite bonus");
  adam_.step(predictor_, predictor_.backward(cache, 2.0 * err));
  return b;
}

}  // namespace laprl
