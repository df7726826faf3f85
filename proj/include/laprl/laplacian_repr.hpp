#pragma once

#include <optional>

#include "laprl/mlp.hpp"
#include "laprl/replay_buffer.hpp"

namespace laprl {

// Learns d approximate Laplacian eigenfunctions f_1..f_d from replayed
// transitions. The generalized objective weighs f_k's smoothness term with
// the strictly decreasing coefficient c_k = d - k + 1, realized by nesting,
// so its optimum is the ordered eigenfunctions rather than just their span.
class LaplacianRepr {
 public:
  // widths = {in, hidden..., d}.
  LaplacianRepr(std::vector<int> widths, double beta, double step_size, RngStream& init_rng);

  struct Batch {
    Eigen::MatrixXd s, s_next;  // m x in transition pairs
    Eigen::MatrixXd aux;        // independently drawn states; split into halves
  };

  struct LossResult {
    double loss = 0.0;
    MlpGrads grads;
  };

  // Eq: 1/2 E[sum_i sum_{k<=i} (f_k(s)-f_k(s'))^2]
  //     + beta sum_i sum_{j<=i} sum_{k<=i} (E[f_j f_k] - delta_jk)^2,
  // with the squared expectation estimated as the product of two estimates
  // over disjoint halves of aux (gradient flows through both halves).
  LossResult generalized_loss(const Batch& batch) const;

  // Same form with all coefficients uniform (single sum over i).
  LossResult wu_loss(const Batch& batch) const;

  // Samples a batch from the buffer and applies one Adam step. Returns the
  // loss, or nullopt (skip signal) when the buffer is undersized.
  std::optional<double> train_step(const ReplayBuffer& buffer, int batch_size,
                                   RngStream& rng, bool use_wu_loss = false);

  // Same update on an already-sampled minibatch of transition pairs (the
  // shared minibatch reuse of the online algorithm); only the aux states for
  // the orthogonality term are drawn here.
  std::optional<double> train_step_on(const std::vector<const Transition*>& pairs,
                                      const ReplayBuffer& buffer, RngStream& aux_rng,
                                      bool use_wu_loss = false);

  // Per-state eigenfunction values, rows = states.
  Eigen::MatrixXd values(const Eigen::MatrixXd& states) const;
  Eigen::VectorXd values(const Eigen::VectorXd& state) const;

  int d() const { return net_.output_width(); }
  double beta() const { return beta_; }
  double coefficient(int i) const { return static_cast<double>(d() - i); }  // c_{i+1}, 0-based
  const Mlp& net() const { return net_; }
  Mlp& net() { return net_; }

 private:
  LossResult loss_impl(const Batch& batch, bool generalized) const;

  Mlp net_;
  Adam adam_;
  double beta_;
};

}  // namespace laprl
