#include "laprl/laplacian_repr.hpp"

#include <cmath>

#include "laprl/error.hpp"

namespace laprl {

LaplacianRepr::LaplacianRepr(std::vector<int> widths, double beta, double step_size,
                             RngStream& init_rng)
    : net_(std::move(widths), init_rng), adam_(net_, step_size), beta_(beta) {}

LaplacianRepr::LossResult LaplacianRepr::generalized_loss(const Batch& batch) const {
  return loss_impl(batch, /*generalized=*/true);
}

LaplacianRepr::LossResult LaplacianRepr::wu_loss(const Batch& batch) const {
  return loss_impl(batch, /*generalized=*/false);
}

LaplacianRepr::LossResult LaplacianRepr::loss_impl(const Batch& batch, bool generalized) const {
  const int m = static_cast<int>(batch.s.rows());
  const int n_aux = static_cast<int>(batch.aux.rows());
  if (m < 1 || n_aux < 2)
    throw UsageError("repr loss needs >= 1 pair and >= 2 aux states");
  if (batch.s_next.rows() != m) throw UsageError("repr loss: pair shape mismatch");
  const int dd = d();
  const int h1 = n_aux / 2;
  const int h2 = n_aux - h1;

  // Smoothness coefficient c_k per function and orthogonality multiplicity
  // per (j,k): the number of i in 1..d whose nested sums include the term.
  Eigen::VectorXd coeff(dd);
  Eigen::MatrixXd mult(dd, dd);
  for (int k = 0; k < dd; ++k) {
    coeff[k] = generalized ? static_cast<double>(dd - k) : 1.0;
    for (int j = 0; j < dd; ++j)
      mult(j, k) = generalized ? static_cast<double>(dd - std::max(j, k)) : 1.0;
  }

  // One stacked pass: [s; s_next; aux_half1; aux_half2].
  Eigen::MatrixXd stacked(2 * m + n_aux, net_.input_width());
  stacked.topRows(m) = batch.s;
  stacked.middleRows(m, m) = batch.s_next;
  stacked.bottomRows(n_aux) = batch.aux;

  Mlp::Cache cache;
  Eigen::MatrixXd f = net_.forward(stacked, cache);
  Eigen::MatrixXd fs = f.topRows(m);
  Eigen::MatrixXd fn = f.middleRows(m, m);
  Eigen::MatrixXd f1 = f.middleRows(2 * m, h1);
  Eigen::MatrixXd f2 = f.bottomRows(h2);

  // Smoothness: 1/2 mean over pairs of sum_k c_k (f_k(s) - f_k(s'))^2.
  Eigen::MatrixXd diff = fs - fn;
  double smooth = 0.5 / m * (diff.array().square().matrix() * coeff).sum();

  // Orthogonality: the squared deviation (E[f_j f_k] - delta)^2 is estimated
  // as the product of the two half-batch estimates, which stays unbiased.
  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(dd, dd);
  Eigen::MatrixXd dev1 = f1.transpose() * f1 / h1 - eye;
  Eigen::MatrixXd dev2 = f2.transpose() * f2 / h2 - eye;
  double ortho = beta_ * (mult.array() * dev1.array() * dev2.array()).sum();

  // Upstream gradients for the stacked output.
  Eigen::MatrixXd upstream(f.rows(), dd);
  upstream.topRows(m) = diff * coeff.asDiagonal() / m;
  upstream.middleRows(m, m) = -upstream.topRows(m);
  Eigen::MatrixXd mdev2 = mult.cwiseProduct(dev2);
  Eigen::MatrixXd mdev1 = mult.cwiseProduct(dev1);
  upstream.middleRows(2 * m, h1) = (2.0 * beta_ / h1) * f1 * mdev2;
  upstream.bottomRows(h2) = (2.0 * beta_ / h2) * f2 * mdev1;

  LossResult res;
  res.loss = smooth + ortho;
  res.grads = net_.backward(cache, upstream);
  return res;
}

std::optional<double> LaplacianRepr::train_step(const ReplayBuffer& buffer, int batch_size,
                                                RngStream& rng, bool use_wu_loss) {
  if (buffer.size() < static_cast<size_t>(batch_size)) return std::nullopt;  // skip
  auto pairs = buffer.sample(batch_size, rng);
  return train_step_on(pairs, buffer, rng, use_wu_loss);
}

std::optional<double> LaplacianRepr::train_step_on(const std::vector<const Transition*>& pairs,
                                                   const ReplayBuffer& buffer,
                                                   RngStream& aux_rng, bool use_wu_loss) {
  const int m = static_cast<int>(pairs.size());
  if (m < 2 || buffer.size() < 2) return std::nullopt;  // skip
  Batch batch;
  batch.s.resize(m, net_.input_width());
  batch.s_next.resize(m, net_.input_width());
  for (int i = 0; i < m; ++i) {
    batch.s.row(i) = pairs[i]->s.transpose();
    batch.s_next.row(i) = pairs[i]->s_next.transpose();
  }
  // Aux states drawn independently of the pairs.
  auto aux = buffer.sample(m, aux_rng);
  batch.aux.resize(m, net_.input_width());
  for (int i = 0; i < m; ++i) batch.aux.row(i) = aux[i]->s.transpose();

  LossResult res = use_wu_loss ? wu_loss(batch) : generalized_loss(batch);
  adam_.step(net_, res.grads);
  return res.loss;
}

Eigen::MatrixXd LaplacianRepr::values(const Eigen::MatrixXd& states) const {
  return net_.forward(states);
}

Eigen::VectorXd LaplacianRepr::values(const Eigen::VectorXd& state) const {
  return net_.forward(state.transpose()).transpose();
}

}  // namespace laprl
