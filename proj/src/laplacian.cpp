#include "laprl/laplacian.hpp"

#include <Eigen/Eigenvalues>
#include <deque>
#include <fstream>

#include "laprl/error.hpp"

namespace laprl {

namespace {

bool connected(const Eigen::MatrixXd& w) {
  const int n = static_cast<int>(w.rows());
  if (n == 0) return false;
  std::vector<char> seen(n, 0);
  std::deque<int> frontier{0};
  seen[0] = 1;
  int reached = 0;
  while (!frontier.empty()) {
    int s = frontier.front();
    frontier.pop_front();
    ++reached;
    for (int t = 0; t < n; ++t) {
      if (w(s, t) > 0 && !seen[t]) {
        seen[t] = 1;
        frontier.push_back(t);
      }
    }
  }
  return reached == n;
}

GraphLaplacian from_adjacency(Eigen::MatrixXd w, bool require_connected) {
  if (require_connected && !connected(w))
    throw ConfigError("state graph is disconnected; Laplacian oracle requires connectivity");
  GraphLaplacian lap;
  lap.n = static_cast<int>(w.rows());
  Eigen::VectorXd deg = w.rowwise().sum();
  lap.matrix = Eigen::MatrixXd(deg.asDiagonal()) - w;
  return lap;
}

}  // namespace

GraphLaplacian build_laplacian(const Environment& env) {
  const int n = env.num_states();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int s = 0; s < n; ++s) {
    for (int a = 0; a < env.num_actions(); ++a) {
      int t = env.skeleton_next(s, a);
      if (t != s) {
        w(s, t) = 1.0;
        w(t, s) = 1.0;
      }
    }
  }
  return from_adjacency(std::move(w), /*require_connected=*/true);
}

GraphLaplacian laplacian_from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (auto [s, t] : edges) {
    if (s < 0 || t < 0 || s >= n || t >= n) throw UsageError("edge node id out of range");
    if (s != t) {
      w(s, t) = 1.0;
      w(t, s) = 1.0;
    }
  }
  return from_adjacency(std::move(w), /*require_connected=*/false);
}

EigenSystem eigendecompose(const GraphLaplacian& lap, int d, int anchor_state) {
  if (d > lap.n) throw UsageError("requested more eigenpairs than states");
  if (!lap.matrix.isApprox(lap.matrix.transpose(), 1e-12))
    throw InternalError("Laplacian matrix is not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap.matrix);
  if (solver.info() != Eigen::Success)
    throw InternalError("eigendecomposition failed to converge");

  EigenSystem eig;
  eig.eigenvalues = solver.eigenvalues().head(d);
  eig.eigenfunctions = solver.eigenvectors().leftCols(d);
  for (int i = 0; i < d; ++i) {
    if (eig.eigenfunctions(anchor_state, i) < 0) eig.eigenfunctions.col(i) *= -1.0;
  }
  return eig;
}

double tabular_intrinsic_reward(const EigenSystem& eig, int i, int s, int s_next) {
  if (i < 0 || i >= eig.count()) throw UsageError("eigenfunction index out of range");
  return eig.eigenfunctions(s_next, i) - eig.eigenfunctions(s, i);
}

void export_eigenfunctions_csv(const EigenSystem& eig, const Environment& env,
                               const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << "tabular_id,x,y";
  for (int i = 0; i < eig.count(); ++i) out << ",e" << (i + 1);
  out << "\n";
  for (int s = 0; s < env.num_states(); ++s) {
    out << s;
    if (auto xy = env.state_coords(s)) {
      out << "," << xy->first << "," << xy->second;
    } else {
      out << ",,";
    }
    for (int i = 0; i < eig.count(); ++i) out << "," << eig.eigenfunctions(s, i);
    out << "\n";
  }
}

}  // namespace laprl
