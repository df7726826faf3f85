#pragma once

#include <Eigen/Core>
#include <vector>

#include "laprl/rng.hpp"

namespace laprl {

struct MlpGrads {
  std::vector<Eigen::MatrixXd> w;
  std::vector<Eigen::VectorXd> b;

  MlpGrads& operator+=(const MlpGrads& other);
  void scale(double c);
  bool finite() const;
};

// Fully connected net: ReLU hidden layers, linear output. Value semantics;
// copying an Mlp snapshots its parameters (target-network duplication).
class Mlp {
 public:
  // widths = {in, hidden..., out}; uniform init scaled by 1/sqrt(fan_in).
  Mlp(std::vector<int> widths, RngStream& rng);

  // Rows are batch samples.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& batch) const;

  struct Cache {
    std::vector<Eigen::MatrixXd> activations;  // input + post-ReLU per hidden layer
    Eigen::MatrixXd output;
  };
  Eigen::MatrixXd forward(const Eigen::MatrixXd& batch, Cache& cache) const;

  // Gradients of sum(upstream .* forward(batch)) w.r.t. parameters.
  MlpGrads backward(const Cache& cache, const Eigen::MatrixXd& upstream) const;

  // Same, but also returns d/d(input) (needed by losses over several passes).
  MlpGrads backward(const Cache& cache, const Eigen::MatrixXd& upstream,
                    Eigen::MatrixXd* input_grad) const;

  MlpGrads zero_grads() const;

  int input_width() const { return widths_.front(); }
  int output_width() const { return widths_.back(); }
  int layer_count() const { return static_cast<int>(w_.size()); }
  const std::vector<int>& widths() const { return widths_; }

  std::vector<Eigen::MatrixXd>& weights() { return w_; }
  std::vector<Eigen::VectorXd>& biases() { return b_; }
  const std::vector<Eigen::MatrixXd>& weights() const { return w_; }
  const std::vector<Eigen::VectorXd>& biases() const { return b_; }

 private:
  std::vector<int> widths_;
  std::vector<Eigen::MatrixXd> w_;  // layer l: widths[l] x widths[l+1]
  std::vector<Eigen::VectorXd> b_;
};

// Standard Adam. Owns the moment accumulators for one Mlp.
class Adam {
 public:
  explicit Adam(const Mlp& net, double step_size, double beta1 = 0.9,
                double beta2 = 0.999, double epsilon = 1e-8);

  // Throws TrainingError on non-finite gradients.
  void step(Mlp& net, const MlpGrads& grads);

  double step_size() const { return alpha_; }
  long long step_count() const { return t_; }

 private:
  double alpha_, beta1_, beta2_, eps_;
  long long t_ = 0;
  MlpGrads m_, v_;
};

// Checkpoint I/O: CSV of named tensors with shape headers.
void save_mlp(const Mlp& net, const std::string& name, std::ostream& out);
Mlp load_mlp(std::istream& in, std::string* name = nullptr);

}  // namespace laprl
