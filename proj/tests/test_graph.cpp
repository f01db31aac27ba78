#include <doctest.h>

#include <random>
#include <stdexcept>

#include "docsim/graph.hpp"

using namespace docsim;

namespace {

Graph four_ring() {
  return Graph::build(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 0, 1.0}});
}

}  // namespace

TEST_CASE("build: 4-node unit ring is 2-regular") {
  const Graph g = four_ring();
  for (int j = 0; j < 4; ++j) {
    CHECK(g.neighbors(j).size() == 2);
    CHECK(g.neighbor_weight_sum(j) == doctest::Approx(2.0));
  }
}

TEST_CASE("build: degenerate and tiny graphs") {
  const Graph lone = Graph::build(1, {});
  CHECK(lone.neighbors(0).empty());

  const Graph pair = Graph::build(2, {{0, 1, 1.0}});
  CHECK(pair.neighbors(0) == std::vector<int>{1});
  CHECK(pair.neighbors(1) == std::vector<int>{0});
}

TEST_CASE("build: rejects bad edges") {
  CHECK_THROWS_AS(Graph::build(2, {{0, 2, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph::build(2, {{1, 1, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph::build(2, {{0, 1, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph::build(2, {{0, 1, -0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph::build(3, {{0, 1, 1.0}, {1, 0, 2.0}}), std::invalid_argument);
}

TEST_CASE("laplacian: closed forms") {
  const Laplacian l4 = laplacian(four_ring());
  // circulant rows [2, -1, 0, -1]
  for (int i = 0; i < 4; ++i) {
    CHECK(l4.matrix(i, i) == doctest::Approx(2.0));
    CHECK(l4.matrix(i, (i + 1) % 4) == doctest::Approx(-1.0));
    CHECK(l4.matrix(i, (i + 2) % 4) == doctest::Approx(0.0));
  }

  const Laplacian l2 = laplacian(Graph::build(2, {{0, 1, 1.0}}));
  CHECK(l2.matrix(0, 0) == doctest::Approx(1.0));
  CHECK(l2.matrix(0, 1) == doctest::Approx(-1.0));
  CHECK(l2.matrix(1, 0) == doctest::Approx(-1.0));
  CHECK(l2.matrix(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("laplacian: 4-ring spectrum {0,2,2,4}") {
  const Eigen::VectorXd eig = laplacian(four_ring()).eigenvalues();
  CHECK(std::abs(eig(0) - 0.0) < 1e-9);
  CHECK(std::abs(eig(1) - 2.0) < 1e-9);
  CHECK(std::abs(eig(2) - 2.0) < 1e-9);
  CHECK(std::abs(eig(3) - 4.0) < 1e-9);
}

TEST_CASE("laplacian: expansion acts blockwise") {
  const Laplacian l = laplacian(Graph::build(2, {{0, 1, 2.0}}));
  const Eigen::MatrixXd big = l.expanded(3);
  CHECK(big.rows() == 6);
  CHECK(big(0, 0) == doctest::Approx(2.0));
  CHECK(big(0, 3) == doctest::Approx(-2.0));
  CHECK(big(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("connectivity") {
  CHECK(four_ring().connected());
  CHECK_FALSE(Graph::build(2, {}).connected());
  CHECK(four_ring().prune({3}).connected());  // path 0-1-2 remains
}

TEST_CASE("prune semantics") {
  const Graph g = four_ring();

  const Graph path = g.prune({3});
  CHECK(path.size() == 3);
  CHECK(path.neighbors(1).size() == 2);
  CHECK(path.original_index(2) == 2);

  const Graph same = g.prune({});
  CHECK(same.size() == 4);
  CHECK(same.weights() == g.weights());

  const Graph split = g.prune({1, 3});
  CHECK(split.size() == 2);
  CHECK(split.neighbors(0).empty());
  CHECK_FALSE(split.connected());

  CHECK_THROWS_AS(g.prune({0, 1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(g.prune({7}), std::invalid_argument);
}

TEST_CASE("properties: symmetry, zero row sums, prune/laplacian commute") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> w(0.1, 3.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  for (int trial = 0; trial < 25; ++trial) {
    const int n = 3 + trial % 5;
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (i + 1 == j || coin(rng) < 0.4) edges.push_back({i, j, w(rng)});
      }
    }
    const Graph g = Graph::build(n, edges);
    CHECK((g.weights() - g.weights().transpose()).cwiseAbs().maxCoeff() == 0.0);

    const Laplacian l = laplacian(g);
    CHECK(l.matrix.rowwise().sum().cwiseAbs().maxCoeff() < 1e-12);
    // eigenvalue 0 with the all-ones eigenvector
    CHECK((l.matrix * Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff() < 1e-12);

    // prune then laplacian == laplacian of an independently built subgraph
    const std::vector<int> flagged{0};
    const Graph pruned = g.prune(flagged);
    std::vector<Edge> sub_edges;
    for (const Edge& e : edges) {
      if (e.i != 0 && e.j != 0) sub_edges.push_back({e.i - 1, e.j - 1, e.weight});
    }
    const Graph rebuilt = Graph::build(n - 1, sub_edges);
    CHECK((laplacian(pruned).matrix - laplacian(rebuilt).matrix)
              .cwiseAbs()
              .maxCoeff() < 1e-15);
  }
}
