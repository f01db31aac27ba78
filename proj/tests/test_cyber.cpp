#include <doctest.h>

#include <cmath>
#include <random>

#include "docsim/cyber.hpp"

using namespace docsim;

namespace {

Graph four_ring() {
  return Graph::build(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 0, 1.0}});
}

Eigen::VectorXd scalar(double v) { return Eigen::VectorXd::Constant(1, v); }

// Least-squares dual oracle: minimum-norm v* with (L (x) I_m) v* = -grad g(y*).
std::vector<Eigen::VectorXd> dual_certificate(const Graph& g,
                                              const std::vector<Objective>& objs,
                                              const Eigen::VectorXd& y_star) {
  const int n = g.size();
  const int m = static_cast<int>(y_star.size());
  const Eigen::MatrixXd big_l = laplacian(g).expanded(m);
  Eigen::VectorXd rhs(n * m);
  for (int j = 0; j < n; ++j) rhs.segment(j * m, m) = -objs[j].gradient(y_star);
  const Eigen::VectorXd v =
      big_l.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
  std::vector<Eigen::VectorXd> out(n);
  for (int j = 0; j < n; ++j) out[j] = v.segment(j * m, m);
  return out;
}

}  // namespace

TEST_CASE("v_tilde: consensus gives zero") {
  const Graph g = four_ring();
  const std::vector<Eigen::VectorXd> v(4, scalar(0.7));
  for (int j = 0; j < 4; ++j) CHECK(v_tilde(j, v, g).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("v_tilde: hand sums") {
  const Graph pair = Graph::build(2, {{0, 1, 1.0}});
  CHECK(v_tilde(0, {scalar(1.0), scalar(0.0)}, pair)(0) == doctest::Approx(1.0));

  const Graph g = four_ring();
  const std::vector<Eigen::VectorXd> v{scalar(1), scalar(2), scalar(3), scalar(4)};
  CHECK(v_tilde(0, v, g)(0) == doctest::Approx(-4.0));  // (1-2) + (1-4)
}

TEST_CASE("optimizer_deriv: consensus equilibrium with flat objectives") {
  const Graph g = four_ring();
  Objective flat;
  flat.value = [](const Eigen::VectorXd&) { return 0.0; };
  flat.gradient = [](const Eigen::VectorXd& s) { return Eigen::VectorXd::Zero(s.size()); };
  flat.hessian = [](const Eigen::VectorXd& s) {
    return Eigen::MatrixXd::Zero(s.size(), s.size());
  };
  const std::vector<Eigen::VectorXd> y(4, scalar(2.0));
  const std::vector<Eigen::VectorXd> v(4, scalar(-1.0));
  for (int j = 0; j < 4; ++j) {
    const OptimizerDeriv d = optimizer_deriv(j, {y[j], v[j]}, y, v, flat, 2.5, g);
    CHECK(d.y_r_dot.cwiseAbs().maxCoeff() == 0.0);
    CHECK(d.v_dot.cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("optimizer_deriv: two-node symmetry of the dual rate") {
  const Graph pair = Graph::build(2, {{0, 1, 1.0}});
  const std::vector<Objective> objs{quadratic_objective(scalar(1.0)),
                                    quadratic_objective(scalar(-1.0))};
  const std::vector<Eigen::VectorXd> y{scalar(0.4), scalar(-0.4)};
  const std::vector<Eigen::VectorXd> v{scalar(0.0), scalar(0.0)};
  const OptimizerDeriv d0 = optimizer_deriv(0, {y[0], v[0]}, y, v, objs[0], 2.5, pair);
  const OptimizerDeriv d1 = optimizer_deriv(1, {y[1], v[1]}, y, v, objs[1], 2.5, pair);
  CHECK(d0.v_dot(0) == doctest::Approx(-d1.v_dot(0)));
}

TEST_CASE("optimizer_deriv: isolated node decays along -grad") {
  const Graph lone = Graph::build(1, {});
  const Objective obj = quadratic_objective(scalar(0.0));  // g(s) = s^2
  const std::vector<Eigen::VectorXd> y{scalar(0.3)};
  const std::vector<Eigen::VectorXd> v{scalar(0.0)};
  const OptimizerDeriv d = optimizer_deriv(0, {y[0], v[0]}, y, v, obj, 2.5, lone);
  CHECK(d.y_r_dot(0) == doctest::Approx(-2.0 * 0.3));
  CHECK(d.v_dot(0) == doctest::Approx(0.0));
}

TEST_CASE("make_command echoes its inputs") {
  const Objective obj = quadratic_objective(scalar(0.5));
  const AgentState a{scalar(0.9), scalar(0.0)};
  const Command c = make_command(a, obj, scalar(0.25));
  CHECK(c.y_r(0) == doctest::Approx(0.9));
  CHECK(c.grad(0) == doctest::Approx(2.0 * (0.9 - 0.5)));
  CHECK(c.v_tilde(0) == doctest::Approx(0.25));
}

TEST_CASE("optimality_residual: centroid of quadratics is optimal") {
  const Graph g = four_ring();
  std::vector<Objective> objs;
  std::vector<Eigen::VectorXd> centers;
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd centroid = Eigen::VectorXd::Zero(2);
  for (int j = 0; j < 4; ++j) {
    Eigen::VectorXd c(2);
    c << dist(rng), dist(rng);
    centroid += c;
    centers.push_back(c);
    objs.push_back(quadratic_objective(c));
  }
  centroid /= 4.0;

  const std::vector<Eigen::VectorXd> y(4, centroid);
  const OptimalityResidual at_opt = optimality_residual(y, objs, g);
  CHECK(at_opt.consensus_err < 1e-12);
  CHECK(at_opt.stationarity_err < 1e-12);

  std::vector<Eigen::VectorXd> off = y;
  off[2](0) += 0.1;
  CHECK(optimality_residual(off, objs, g).consensus_err > 0.0);
}

TEST_CASE("optimality_residual: the 4-ROV rendezvous point") {
  const Graph g = four_ring();
  const std::vector<Eigen::Vector4d> poses = {
      {0.3, 0.4, 1.0, 0.0},
      {0.1, 0.1, 0.5, -M_PI / 6.0},
      {0.0, 0.0, 0.0, -M_PI / 8.0},
      {0.2, 0.5, 1.0, 0.0},
  };
  std::vector<Objective> objs;
  for (const auto& pose : poses) objs.push_back(quadratic_objective(pose));

  Eigen::VectorXd opt(4);
  opt << 0.15, 0.25, 0.625, -7.0 * M_PI / 96.0;
  const std::vector<Eigen::VectorXd> y(4, opt);
  const OptimalityResidual res = optimality_residual(y, objs, g);
  CHECK(res.consensus_err < 1e-12);
  CHECK(res.stationarity_err < 1e-12);
}

TEST_CASE("fixed point: saddle certificate zeroes the optimizer") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const Graph g = Graph::build(3, {{0, 1, 1.3}, {1, 2, 0.6}, {0, 2, 2.0}});
  const int m = 2;

  std::vector<Objective> objs;
  Eigen::VectorXd centroid = Eigen::VectorXd::Zero(m);
  for (int j = 0; j < 3; ++j) {
    Eigen::VectorXd c(m);
    c << dist(rng), dist(rng);
    centroid += c;
    objs.push_back(quadratic_objective(c));
  }
  centroid /= 3.0;

  const std::vector<Eigen::VectorXd> v_star = dual_certificate(g, objs, centroid);
  const std::vector<Eigen::VectorXd> y(3, centroid);
  for (int j = 0; j < 3; ++j) {
    const OptimizerDeriv d =
        optimizer_deriv(j, {y[j], v_star[j]}, y, v_star, objs[j], 2.5, g);
    CHECK(d.y_r_dot.cwiseAbs().maxCoeff() < 1e-10);
    CHECK(d.v_dot.cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("objective derivatives match finite differences") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  const double h = 1e-6;
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 1 + trial % 3;
    Eigen::VectorXd c(m), at(m);
    for (int s = 0; s < m; ++s) {
      c(s) = dist(rng);
      at(s) = dist(rng);
    }
    const Objective obj = quadratic_objective(c);
    for (int s = 0; s < m; ++s) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
      e(s) = h;
      const double fd = (obj.value(at + e) - obj.value(at - e)) / (2.0 * h);
      CHECK(std::abs(fd - obj.gradient(at)(s)) / (1.0 + std::abs(fd)) < 1e-6);
      const Eigen::VectorXd fd_col =
          (obj.gradient(at + e) - obj.gradient(at - e)) / (2.0 * h);
      CHECK((fd_col - obj.hessian(at).col(s)).norm() < 1e-5);
    }
    // convexity along a random segment (midpoint inequality)
    Eigen::VectorXd b(m);
    for (int s = 0; s < m; ++s) b(s) = dist(rng);
    CHECK(obj.value(0.5 * (at + b)) <= 0.5 * obj.value(at) + 0.5 * obj.value(b) + 1e-12);
  }
}
