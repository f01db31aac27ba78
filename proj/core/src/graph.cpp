#include "docsim/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>

namespace docsim {

Graph Graph::build(int n_nodes, const std::vector<Edge>& edges) {
  if (n_nodes <= 0) {
    throw std::invalid_argument("graph: node count must be positive");
  }
  Graph g;
  g.n_ = n_nodes;
  g.weights_ = Eigen::MatrixXd::Zero(n_nodes, n_nodes);
  g.neighbors_.resize(n_nodes);
  g.original_.resize(n_nodes);
  std::iota(g.original_.begin(), g.original_.end(), 0);

  for (const Edge& e : edges) {
    if (e.i < 0 || e.i >= n_nodes || e.j < 0 || e.j >= n_nodes) {
      throw std::invalid_argument("graph: edge index out of range (" +
                                  std::to_string(e.i) + "," + std::to_string(e.j) + ")");
    }
    if (e.i == e.j) {
      throw std::invalid_argument("graph: self-loop at node " + std::to_string(e.i));
    }
    if (!(e.weight > 0.0)) {
      throw std::invalid_argument("graph: nonpositive edge weight");
    }
    if (g.weights_(e.i, e.j) != 0.0) {
      throw std::invalid_argument("graph: duplicate edge (" + std::to_string(e.i) +
                                  "," + std::to_string(e.j) + ")");
    }
    g.weights_(e.i, e.j) = e.weight;
    g.weights_(e.j, e.i) = e.weight;
    g.neighbors_[e.i].push_back(e.j);
    g.neighbors_[e.j].push_back(e.i);
  }
  for (auto& nbrs : g.neighbors_) {
    std::sort(nbrs.begin(), nbrs.end());
  }
  return g;
}

double Graph::neighbor_weight_sum(int j) const {
  double s = 0.0;
  for (int i : neighbors_[j]) s += weights_(j, i);
  return s;
}

bool Graph::connected() const {
  if (n_ == 0) return false;
  std::vector<bool> seen(n_, false);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = true;
  int reached = 1;
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop();
    for (int w : neighbors_[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        frontier.push(w);
      }
    }
  }
  return reached == n_;
}

Graph Graph::prune(const std::vector<int>& flagged) const {
  std::vector<bool> drop(n_, false);
  for (int f : flagged) {
    if (f < 0 || f >= n_) throw std::invalid_argument("prune: flagged index out of range");
    drop[f] = true;
  }
  std::vector<int> keep;
  for (int v = 0; v < n_; ++v) {
    if (!drop[v]) keep.push_back(v);
  }
  if (keep.empty()) throw std::invalid_argument("prune: all nodes flagged");

  Graph g;
  g.n_ = static_cast<int>(keep.size());
  g.weights_ = Eigen::MatrixXd::Zero(g.n_, g.n_);
  g.neighbors_.resize(g.n_);
  g.original_.resize(g.n_);
  for (int a = 0; a < g.n_; ++a) {
    g.original_[a] = original_[keep[a]];
    for (int b = a + 1; b < g.n_; ++b) {
      const double w = weights_(keep[a], keep[b]);
      if (w > 0.0) {
        g.weights_(a, b) = w;
        g.weights_(b, a) = w;
        g.neighbors_[a].push_back(b);
        g.neighbors_[b].push_back(a);
      }
    }
  }
  return g;
}

Eigen::MatrixXd Laplacian::expanded(int m) const {
  const auto n = matrix.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n * m, n * m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out.block(i * m, j * m, m, m) =
          matrix(i, j) * Eigen::MatrixXd::Identity(m, m);
    }
  }
  return out;
}

Eigen::VectorXd Laplacian::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix);
  return solver.eigenvalues();
}

Laplacian laplacian(const Graph& g) {
  Laplacian l;
  l.matrix = -g.weights();
  for (int j = 0; j < g.size(); ++j) {
    l.matrix(j, j) = g.neighbor_weight_sum(j);
  }
  return l;
}

}  // namespace docsim
