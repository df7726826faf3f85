#include "laprl/mlp.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "laprl/error.hpp"

namespace laprl {

MlpGrads& MlpGrads::operator+=(const MlpGrads& other) {
  for (size_t i = 0; i < w.size(); ++i) {
    w[i] += other.w[i];
    b[i] += other.b[i];
  }
  return *this;
}

void MlpGrads::scale(double c) {
  for (size_t i = 0; i < w.size(); ++i) {
    w[i] *= c;
    b[i] *= c;
  }
}

bool MlpGrads::finite() const {
  for (size_t i = 0; i < w.size(); ++i) {
    if (!w[i].allFinite() || !b[i].allFinite()) return false;
  }
  return true;
}

Mlp::Mlp(std::vector<int> widths, RngStream& rng) : widths_(std::move(widths)) {
  if (widths_.size() < 2) throw UsageError("Mlp needs at least input and output widths");
  for (size_t l = 0; l + 1 < widths_.size(); ++l) {
    double scale = 1.0 / std::sqrt(static_cast<double>(widths_[l]));
    Eigen::MatrixXd w(widths_[l], widths_[l + 1]);
    for (int i = 0; i < w.rows(); ++i)
      for (int j = 0; j < w.cols(); ++j) w(i, j) = rng.uniform(-scale, scale);
    w_.push_back(std::move(w));
    b_.push_back(Eigen::VectorXd::Zero(widths_[l + 1]));
  }
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& batch) const {
  Cache cache;
  return forward(batch, cache);
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& batch, Cache& cache) const {
  if (batch.cols() != input_width())
    throw UsageError("forward: batch width " + std::to_string(batch.cols()) +
                     " != input width " + std::to_string(input_width()));
  cache.activations.clear();
  cache.activations.push_back(batch);
  Eigen::MatrixXd h = batch;
  for (int l = 0; l < layer_count(); ++l) {
    h = (h * w_[l]).rowwise() + b_[l].transpose();
    if (l + 1 < layer_count()) {
      h = h.cwiseMax(0.0);
      cache.activations.push_back(h);
    }
  }
  cache.output = h;
  return h;
}

MlpGrads Mlp::backward(const Cache& cache, const Eigen::MatrixXd& upstream) const {
  return backward(cache, upstream, nullptr);
}

MlpGrads Mlp::backward(const Cache& cache, const Eigen::MatrixXd& upstream,
                       Eigen::MatrixXd* input_grad) const {
  if (upstream.rows() != cache.output.rows() || upstream.cols() != cache.output.cols())
    throw UsageError("backward: upstream shape mismatch");
  MlpGrads g = zero_grads();
  Eigen::MatrixXd delta = upstream;
  for (int l = layer_count() - 1; l >= 0; --l) {
    g.w[l] = cache.activations[l].transpose() * delta;
    g.b[l] = delta.colwise().sum();
    if (l > 0 || input_grad) {
      Eigen::MatrixXd prev = delta * w_[l].transpose();
      if (l > 0) {
        // ReLU mask from the stored post-activation.
        prev.array() *= (cache.activations[l].array() > 0.0).cast<double>();
      }
      delta = std::move(prev);
    }
  }
  if (input_grad) *input_grad = delta;
  return g;
}

MlpGrads Mlp::zero_grads() const {
  MlpGrads g;
  for (int l = 0; l < layer_count(); ++l) {
    g.w.push_back(Eigen::MatrixXd::Zero(w_[l].rows(), w_[l].cols()));
    g.b.push_back(Eigen::VectorXd::Zero(b_[l].size()));
  }
  return g;
}

Adam::Adam(const Mlp& net, double step_size, double beta1, double beta2, double epsilon)
    : alpha_(step_size), beta1_(beta1), beta2_(beta2), eps_(epsilon),
      m_(net.zero_grads()), v_(net.zero_grads()) {}

void Adam::step(Mlp& net, const MlpGrads& grads) {
  if (!grads.finite())
    throw TrainingError("Adam: non-finite gradient at step " + std::to_string(t_ + 1));
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (int l = 0; l < net.layer_count(); ++l) {
    m_.w[l] = beta1_ * m_.w[l] + (1.0 - beta1_) * grads.w[l];
    v_.w[l] = beta2_ * v_.w[l] + (1.0 - beta2_) * grads.w[l].cwiseProduct(grads.w[l]);
    m_.b[l] = beta1_ * m_.b[l] + (1.0 - beta1_) * grads.b[l];
    v_.b[l] = beta2_ * v_.b[l] + (1.0 - beta2_) * grads.b[l].cwiseProduct(grads.b[l]);
    net.weights()[l].array() -=
        alpha_ * (m_.w[l].array() / bc1) / ((v_.w[l].array() / bc2).sqrt() + eps_);
    net.biases()[l].array() -=
        alpha_ * (m_.b[l].array() / bc1) / ((v_.b[l].array() / bc2).sqrt() + eps_);
  }
}

void save_mlp(const Mlp& net, const std::string& name, std::ostream& out) {
  out << "mlp," << name;
  for (int w : net.widths()) out << "," << w;
  out << "\n";
  out.precision(17);
  for (int l = 0; l < net.layer_count(); ++l) {
    const auto& w = net.weights()[l];
    out << "tensor,w" << l << "," << w.rows() << "," << w.cols() << "\n";
    for (int i = 0; i < w.rows(); ++i) {
      for (int j = 0; j < w.cols(); ++j) out << (j ? "," : "") << w(i, j);
      out << "\n";
    }
    const auto& b = net.biases()[l];
    out << "tensor,b" << l << "," << b.size() << ",1\n";
    for (int i = 0; i < b.size(); ++i) out << (i ? "," : "") << b(i);
    out << "\n";
  }
}

Mlp load_mlp(std::istream& in, std::string* name) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("checkpoint: missing header");
  std::vector<std::string> parts;
  {
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) parts.push_back(tok);
  }
  if (parts.size() < 4 || parts[0] != "mlp") throw ConfigError("checkpoint: bad header");
  if (name) *name = parts[1];
  std::vector<int> widths;
  for (size_t i = 2; i < parts.size(); ++i) widths.push_back(std::stoi(parts[i]));
  RngStream dummy(0);
  Mlp net(widths, dummy);
  for (int l = 0; l < net.layer_count(); ++l) {
    auto read_tensor = [&](Eigen::Index rows, Eigen::Index cols, auto&& store) {
      std::getline(in, line);  // tensor header, shape already known
      for (Eigen::Index i = 0; i < rows; ++i) {
        if (!std::getline(in, line)) throw ConfigError("checkpoint: truncated tensor");
        std::stringstream ss(line);
        std::string tok;
        for (Eigen::Index j = 0; j < cols; ++j) {
          if (!std::getline(ss, tok, ',')) throw ConfigError("checkpoint: short row");
          store(i, j, std::stod(tok));
        }
      }
    };
    auto& w = net.weights()[l];
    read_tensor(w.rows(), w.cols(), [&](auto i, auto j, double v) { w(i, j) = v; });
    auto& b = net.biases()[l];
    read_tensor(1, b.size(), [&](auto, auto j, double v) { b(j) = v; });
  }
  return net;
}

}  // namespace laprl
