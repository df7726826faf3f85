#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "laprl/environment.hpp"

namespace laprl {

// Combinatorial graph Laplacian L = Deg - W of an undirected, unweighted
// state graph. Symmetric, positive semidefinite, zero row sums.
struct GraphLaplacian {
  int n = 0;
  Eigen::MatrixXd matrix;
  std::string adjacency_source = "deterministic-skeleton";
};

// The d smallest eigenpairs, ascending. Eigenfunctions are unit-norm columns
// with a fixed sign convention (entry at the designated anchor state >= 0).
struct EigenSystem {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenfunctions;  // n x d, column i pairs with eigenvalue i

  int count() const { return static_cast<int>(eigenvalues.size()); }
};

// W[s,s'] = 1 iff some action moves s -> s' or s' -> s under the deterministic
// skeleton (self-loops excluded). Throws ConfigError on a disconnected graph.
GraphLaplacian build_laplacian(const Environment& env);

// Laplacian over an explicitly observed edge list (tabular CEO's per-episode
// rebuild). Node ids must be in [0, n). Connectivity is not enforced here.
GraphLaplacian laplacian_from_edges(int n, const std::vector<std::pair<int, int>>& edges);

// Dense symmetric eigendecomposition; anchor_state fixes the sign of each
// eigenfunction (entry at anchor >= 0, left alone when exactly zero).
EigenSystem eigendecompose(const GraphLaplacian& lap, int d, int anchor_state = 0);

// r(s, s') = e_i(s') - e_i(s).
double tabular_intrinsic_reward(const EigenSystem& eig, int i, int s, int s_next);

// Per-state CSV: tabular_id, x, y, e_1..e_d (x, y blank for non-grid envs).
void export_eigenfunctions_csv(const EigenSystem& eig, const Environment& env,
                               const std::string& path);

}  // namespace laprl
