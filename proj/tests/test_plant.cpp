#include <doctest.h>

#include <cmath>
#include <random>

#include "docsim/plant.hpp"

using namespace docsim;

TEST_CASE("plant_deriv: double integrator") {
  const PlantParams p = integrator_chain(2, 1);
  Eigen::VectorXd x(2);
  x << 0.0, 3.0;
  const Eigen::VectorXd dx = plant_deriv(x, Eigen::VectorXd::Zero(1), p);
  CHECK(dx(0) == doctest::Approx(3.0));
  CHECK(dx(1) == doctest::Approx(0.0));
}

TEST_CASE("plant_deriv: quadratic regressor contributes phi theta") {
  PlantParams p;
  p.n = 2;
  p.m = 1;
  p.p = 1;
  p.theta_true = Eigen::VectorXd::Constant(1, 2.0);
  p.regressor = [](int stage, const Eigen::VectorXd& xbar) -> Eigen::MatrixXd {
    Eigen::MatrixXd phi(1, 1);
    phi(0, 0) = stage == 1 ? xbar(0) * xbar(0) : 0.0;
    return phi;
  };
  p.input_map = [](const Eigen::VectorXd&) { return Eigen::MatrixXd::Identity(1, 1); };

  Eigen::VectorXd x(2);
  x << 1.0, 0.0;
  const Eigen::VectorXd dx = plant_deriv(x, Eigen::VectorXd::Zero(1), p);
  CHECK(dx(0) == doctest::Approx(2.0));  // x2 + x1^2 * theta = 0 + 2
}

TEST_CASE("plant_deriv: linear in u (superposition)") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd theta(2);
  theta << 0.7, -0.4;
  const PlantParams p = bounded_trig_plant(2, theta);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd x(4), u1(2), u2(2);
    for (int i = 0; i < 4; ++i) x(i) = dist(rng);
    for (int i = 0; i < 2; ++i) {
      u1(i) = dist(rng);
      u2(i) = dist(rng);
    }
    const Eigen::VectorXd lhs = plant_deriv(x, u1 + u2, p);
    const Eigen::VectorXd rhs = plant_deriv(x, u1, p) + plant_deriv(x, u2, p) -
                                plant_deriv(x, Eigen::VectorXd::Zero(2), p);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("plant_deriv: zero theta reduces to the integrator chain") {
  const PlantParams trig = bounded_trig_plant(1, Eigen::VectorXd::Zero(2));
  const PlantParams chain = integrator_chain(2, 1);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd x(2), u(1);
    x << dist(rng), dist(rng);
    u << dist(rng);
    CHECK((plant_deriv(x, u, trig) - plant_deriv(x, u, chain)).cwiseAbs().maxCoeff() ==
          0.0);
  }
}

TEST_CASE("attack: silent before onset on a dense grid") {
  AttackScript atk;
  atk.kind = AttackKind::paper_exponential;
  atk.onset = 30.0;
  AttackContext ctx;
  for (int k = 0; k < 3000; ++k) {
    const double t = 0.01 * k;  // [0, 30)
    CHECK(atk.evaluate(ctx, t, 4).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("attack: exponential profile value at t = 31") {
  AttackScript atk;
  atk.kind = AttackKind::paper_exponential;
  atk.onset = 30.0;
  AttackContext ctx;
  const Eigen::VectorXd a = atk.evaluate(ctx, 31.0, 4);
  // e^{0.5 - 1} [sin 31, cos 31, -sin 31, -cos 31]
  CHECK(a(0) == doctest::Approx(-0.24506121956653762).epsilon(1e-12));
  CHECK(a(1) == doctest::Approx(0.5548192857462722).epsilon(1e-12));
  CHECK(a(2) == doctest::Approx(0.24506121956653762).epsilon(1e-12));
  CHECK(a(3) == doctest::Approx(-0.5548192857462722).epsilon(1e-12));
}

TEST_CASE("attack: l2 kind decays from its amplitude") {
  AttackScript atk;
  atk.kind = AttackKind::l2_decaying;
  atk.onset = 10.0;
  atk.amplitude = 0.05;
  atk.rate = 0.3;
  AttackContext ctx;
  CHECK(atk.evaluate(ctx, 10.0, 2)(0) == doctest::Approx(0.05));
  CHECK(atk.evaluate(ctx, 20.0, 2)(1) == doctest::Approx(0.05 * std::exp(-3.0)));
}

TEST_CASE("sensor_output adds the attack to x1 only") {
  const PlantParams p = integrator_chain(2, 2);
  Eigen::VectorXd x(4);
  x << 1.0, 2.0, 3.0, 4.0;
  AttackScript atk;
  atk.kind = AttackKind::l2_decaying;
  atk.onset = 0.0;
  atk.amplitude = 0.5;
  atk.rate = 0.0;
  AttackContext ctx;
  const Eigen::VectorXd y = sensor_output(x, p, atk, ctx, 1.0);
  CHECK(y(0) == doctest::Approx(1.5));
  CHECK(y(1) == doctest::Approx(2.5));

  AttackScript none;
  CHECK((sensor_output(x, p, none, ctx, 5.0) - x.head(2)).cwiseAbs().maxCoeff() == 0.0);
}
