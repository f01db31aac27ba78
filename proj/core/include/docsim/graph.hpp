#pragma once

#include <Eigen/Dense>
#include <vector>

namespace docsim {

/// One undirected edge with a positive weight.
struct Edge {
  int i = 0;
  int j = 0;
  double weight = 1.0;
};

/// Weighted undirected communication topology.
///
/// Immutable after construction; weights are kept as a dense symmetric
/// matrix with zero diagonal, plus per-node sorted neighbor index sets.
class Graph {
public:
  Graph() = default;  ///< empty graph; use build() for a real one

  /// Builds a graph from an edge list. Throws std::invalid_argument on an
  /// out-of-range index, a self-loop, a non-positive weight, or a duplicate
  /// edge (either orientation).
  static Graph build(int n_nodes, const std::vector<Edge>& edges);

  int size() const { return n_; }
  const Eigen::MatrixXd& weights() const { return weights_; }
  double weight(int i, int j) const { return weights_(i, j); }
  const std::vector<int>& neighbors(int j) const { return neighbors_[j]; }

  /// Sum of incident edge weights w_Nj = sum_{i in N_j} w_ji.
  double neighbor_weight_sum(int j) const;

  /// True iff the graph has a single connected component (breadth-first
  /// traversal; the empty graph of one node counts as connected).
  bool connected() const;

  /// Subgraph induced by the nodes NOT listed in `flagged`, re-indexed in
  /// ascending original order and keeping original weights. Throws if every
  /// node is flagged. `original_index(k)` on the result maps back.
  Graph prune(const std::vector<int>& flagged) const;

  /// Original node id of re-indexed node k (identity for built graphs).
  int original_index(int k) const { return original_[k]; }

private:
  int n_ = 0;
  Eigen::MatrixXd weights_;
  std::vector<std::vector<int>> neighbors_;
  std::vector<int> original_;
};

/// Graph Laplacian: l_ii = sum_j w_ij, l_ij = -w_ij. Symmetric, zero row
/// sums, positive semidefinite.
struct Laplacian {
  Eigen::MatrixXd matrix;

  /// Kronecker expansion L (x) I_m acting on stacked m-vectors.
  Eigen::MatrixXd expanded(int m) const;

  /// Ascending eigenvalues (self-adjoint solve).
  Eigen::VectorXd eigenvalues() const;
};

Laplacian laplacian(const Graph& g);

}  // namespace docsim
