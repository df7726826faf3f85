#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "laprl/error.hpp"
#include "laprl/laplacian_repr.hpp"

using namespace laprl;

namespace {

// Single linear layer so f is hand-computable: f1(x) = w1*x + b1, ...
LaplacianRepr linear_repr(int d, double beta, const Eigen::VectorXd& w,
                          const Eigen::VectorXd& b) {
  RngStream rng(0);
  LaplacianRepr repr({1, d}, beta, 1e-3, rng);
  repr.net().weights()[0] = w.transpose();
  repr.net().biases()[0] = b;
  return repr;
}

LaplacianRepr::Batch hand_batch() {
  LaplacianRepr::Batch batch;
  batch.s.resize(2, 1);
  batch.s_next.resize(2, 1);
  batch.s << 1.0, 0.0;
  batch.s_next << 2.0, 1.0;
  batch.aux.resize(2, 1);
  batch.aux << 1.0, -1.0;
  return batch;
}

double finite_diff_worst(LaplacianRepr& repr, const LaplacianRepr::Batch& batch, bool wu) {
  auto loss_of = [&] {
    return wu ? repr.wu_loss(batch).loss : repr.generalized_loss(batch).loss;
  };
  auto result = wu ? repr.wu_loss(batch) : repr.generalized_loss(batch);
  const double h = 1e-5;
  double worst = 0.0;
  auto probe = [&](double& theta, double analytic) {
    double orig = theta;
    theta = orig + h;
    double up = loss_of();
    theta = orig - h;
    double down = loss_of();
    theta = orig;
    double numeric = (up - down) / (2 * h);
    double denom = std::max({std::abs(numeric), std::abs(analytic), 1e-8});
    worst = std::max(worst, std::abs(numeric - analytic) / denom);
  };
  auto& net = repr.net();
  for (int l = 0; l < net.layer_count(); ++l) {
    for (int i = 0; i < net.weights()[l].rows(); ++i)
      for (int j = 0; j < net.weights()[l].cols(); ++j)
        probe(net.weights()[l](i, j), result.grads.w[l](i, j));
    for (int i = 0; i < net.biases()[l].size(); ++i)
      probe(net.biases()[l][i], result.grads.b[l][i]);
  }
  return worst;
}

}  // namespace

TEST_CASE("coefficients are strictly decreasing, c_i = d - i + 1") {
  RngStream rng(1);
  LaplacianRepr repr({2, 5}, 1.0, 1e-3, rng);
  for (int i = 0; i < 5; ++i) CHECK(repr.coefficient(i) == doctest::Approx(5 - i));
}

TEST_CASE("d=1 constant function 1: loss exactly 0") {
  auto repr = linear_repr(1, 2.0, Eigen::VectorXd::Zero(1),
                          Eigen::VectorXd::Ones(1));
  auto batch = hand_batch();
  CHECK(repr.generalized_loss(batch).loss == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(repr.wu_loss(batch).loss == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("zero functions: generalized loss = beta * d(d+1)/2, wu loss = beta * d") {
  const double beta = 2.0;
  for (int d : {1, 2, 3, 5}) {
    auto repr = linear_repr(d, beta, Eigen::VectorXd::Zero(d), Eigen::VectorXd::Zero(d));
    auto batch = hand_batch();
    // each diagonal term counted with its nesting multiplicity: sum_i i terms
    CHECK(repr.generalized_loss(batch).loss ==
          doctest::Approx(beta * d * (d + 1) / 2.0).epsilon(1e-12));
    CHECK(repr.wu_loss(batch).loss == doctest::Approx(beta * d).epsilon(1e-12));
  }
}

TEST_CASE("d=1: wu and generalized losses coincide") {
  Eigen::VectorXd w(1), b(1);
  w << 0.7;
  b << -0.2;
  auto repr = linear_repr(1, 1.5, w, b);
  auto batch = hand_batch();
  CHECK(repr.generalized_loss(batch).loss == doctest::Approx(repr.wu_loss(batch).loss));
}

TEST_CASE("d=2 hand-computed batch: exact loss values for both objectives") {
  // f1(x) = x, f2(x) = 0.5x + 0.25; pairs (1->2), (0->1); aux {1, -1}
  Eigen::VectorXd w(2), b(2);
  w << 1.0, 0.5;
  b << 0.0, 0.25;
  auto repr = linear_repr(2, 2.0, w, b);
  auto batch = hand_batch();
  // smoothness: both pairs give diffs (-1, -0.5)
  //   generalized: 1/2 * (2*1 + 1*0.25) = 1.125 ; wu: 1/2 * (1 + 0.25) = 0.625
  // orthogonality: half means f(1) = (1, 0.75), f(-1) = (-1, -0.25)
  //   dev1 = [[0, .75], [.75, -.4375]], dev2 = [[0, .25], [.25, -.9375]]
  //   sum with generalized multiplicities (2 on (1,1), else 1):
  //   2*(0.1875 + 0.1875 + 0.41015625) = 1.5703125 (same under wu: (1,1) is 0)
  CHECK(repr.generalized_loss(batch).loss == doctest::Approx(2.6953125).epsilon(1e-12));
  CHECK(repr.wu_loss(batch).loss == doctest::Approx(2.1953125).epsilon(1e-12));
}

TEST_CASE("loss is invariant to pair order within the batch") {
  RngStream rng(5);
  LaplacianRepr repr({3, 8, 2}, 2.0, 1e-3, rng);
  LaplacianRepr::Batch batch;
  batch.s = Eigen::MatrixXd::Random(4, 3);
  batch.s_next = Eigen::MatrixXd::Random(4, 3);
  batch.aux = Eigen::MatrixXd::Random(4, 3);
  double base = repr.generalized_loss(batch).loss;
  batch.s.row(0).swap(batch.s.row(3));
  batch.s_next.row(0).swap(batch.s_next.row(3));
  CHECK(repr.generalized_loss(batch).loss == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("undersized batches are rejected") {
  RngStream rng(5);
  LaplacianRepr repr({2, 2}, 1.0, 1e-3, rng);
  LaplacianRepr::Batch batch;
  batch.s = Eigen::MatrixXd::Random(2, 2);
  batch.s_next = Eigen::MatrixXd::Random(2, 2);
  batch.aux = Eigen::MatrixXd::Random(1, 2);  // orthogonality estimator undefined
  CHECK_THROWS_AS(repr.generalized_loss(batch), UsageError);
}

TEST_CASE("both loss gradients match central finite differences") {
  RngStream rng(11);
  LaplacianRepr repr({3, 12, 3}, 2.0, 1e-3, rng);
  RngStream data(13);
  LaplacianRepr::Batch batch;
  auto fill = [&](Eigen::MatrixXd& m, int rows) {
    m.resize(rows, 3);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = data.uniform() * 2 - 1;
  };
  fill(batch.s, 6);
  fill(batch.s_next, 6);
  fill(batch.aux, 6);
  CHECK(finite_diff_worst(repr, batch, false) <= 1e-4);
  CHECK(finite_diff_worst(repr, batch, true) <= 1e-4);
}

TEST_CASE("train_step skips when the buffer is undersized") {
  RngStream rng(1), train(2);
  LaplacianRepr repr({2, 2}, 1.0, 1e-3, rng);
  ReplayBuffer buf(16);
  CHECK(!repr.train_step(buf, 4, train).has_value());
  Transition t;
  t.s = Eigen::VectorXd::Zero(2);
  t.s_next = Eigen::VectorXd::Ones(2);
  buf.push(t);
  CHECK(!repr.train_step(buf, 4, train).has_value());
}

TEST_CASE("training on a 3-state path drives orthonormality residual below 0.1") {
  // directed edges of the path 0-1-2, one-hot features; repeated so the
  // buffer holds at least one full minibatch (train_step skips otherwise)
  ReplayBuffer buf(64);
  auto onehot = [](int i) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(3);
    v[i] = 1.0;
    return v;
  };
  for (int rep = 0; rep < 8; ++rep) {
    for (auto [a, b] : {std::pair{0, 1}, {1, 0}, {1, 2}, {2, 1}}) {
      Transition t;
      t.s = onehot(a);
      t.s_next = onehot(b);
      t.s_id = a;
      t.s_next_id = b;
      buf.push(t);
    }
  }
  RngStream init(3), train(7);
  // the barrier weight sets the equilibrium norm bias (about lambda / (2 beta)),
  // so it has to be well above the path graph's largest eigenvalue
  LaplacianRepr repr({3, 16, 2}, 10.0, 3e-3, init);
  for (int i = 0; i < 20000; ++i) repr.train_step(buf, 16, train);
  // exact expectation over the buffer's state marginal (0:1, 1:2, 2:1)/4
  Eigen::MatrixXd states(3, 3);
  states << onehot(0).transpose(), onehot(1).transpose(), onehot(2).transpose();
  Eigen::MatrixXd f = repr.values(states);
  Eigen::Vector3d wgt(0.25, 0.5, 0.25);
  double worst = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      double e = (f.col(i).array() * f.col(j).array() * wgt.array()).sum();
      worst = std::max(worst, std::abs(e - (i == j ? 1.0 : 0.0)));
    }
  }
  CHECK(worst < 0.1);
}

TEST_CASE("eigenfunction values are deterministic and finite before training") {
  RngStream rng(9);
  LaplacianRepr repr({4, 8, 3}, 2.0, 1e-3, rng);
  Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(4, -1, 1);
  Eigen::VectorXd first = repr.values(x);
  CHECK(first.allFinite());
  CHECK((repr.values(x) - first).cwiseAbs().maxCoeff() == 0.0);
}
