#include <doctest.h>

#include <cmath>
#include <random>

#include "docsim/rov.hpp"
#include "docsim/sim.hpp"

using namespace docsim;

namespace {

// Test-side rebuild of M nu_v' + C nu + D nu + g for the regressor oracle.
Eigen::Vector4d reduced_lhs(const Eigen::Vector4d& nu, const Eigen::Vector4d& nu_v_dot,
                            const RovParams& p) {
  Eigen::Vector4d lhs = p.inertia() * nu_v_dot;
  lhs += rov_coriolis(nu, p) * nu;
  lhs(0) += -(p.x_u + p.x_uu * std::abs(nu(0))) * nu(0);
  lhs(1) += -(p.y_v + p.y_vv * std::abs(nu(1))) * nu(1);
  lhs(2) += -(p.z_w + p.z_ww * std::abs(nu(2))) * nu(2);
  lhs(3) += -(p.n_r + p.n_rr * std::abs(nu(3))) * nu(3);
  lhs(2) += -(p.weight - p.buoyancy);
  return lhs;
}

}  // namespace

TEST_CASE("rov_deriv: rest is an equilibrium when W = B") {
  const RovParams p;
  const RovState rest;
  const RovDeriv d = rov_deriv(rest, Eigen::Vector4d::Zero(), p);
  CHECK(d.eta_dot.cwiseAbs().maxCoeff() == 0.0);
  CHECK(d.nu_dot.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("rov_deriv: pure surge decelerates by the damping sum") {
  const RovParams p;
  RovState s;
  s.nu << 1.0, 0.0, 0.0, 0.0;
  const RovDeriv d = rov_deriv(s, Eigen::Vector4d::Zero(), p);
  CHECK(d.eta_dot(0) == doctest::Approx(1.0));
  CHECK(d.eta_dot(1) == doctest::Approx(0.0));
  CHECK(d.nu_dot(0) == doctest::Approx(-0.9831896551724137));  // (X_u + X_uu)/m11
}

TEST_CASE("rov_deriv: heading rotates the body velocity") {
  const RovParams p;
  RovState s;
  s.eta << 0.0, 0.0, 0.0, M_PI / 2.0;
  s.nu << 1.0, 0.0, 0.0, 0.0;
  const RovDeriv d = rov_deriv(s, Eigen::Vector4d::Zero(), p);
  CHECK(d.eta_dot(0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(d.eta_dot(1) == doctest::Approx(1.0));
}

TEST_CASE("rov: Coriolis matrix is skew on random velocities") {
  const RovParams p;
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int trial = 0; trial < 1000; ++trial) {
    Eigen::Vector4d nu;
    for (int i = 0; i < 4; ++i) nu(i) = dist(rng);
    const Eigen::Matrix4d c = rov_coriolis(nu, p);
    CHECK((c + c.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(std::abs(nu.dot(c * nu)) < 1e-10);
  }
}

TEST_CASE("rov_regressor: identity against the dynamics on random points") {
  const RovParams p;
  const Eigen::VectorXd sigma = p.sigma();
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int trial = 0; trial < 1000; ++trial) {
    Eigen::Vector4d nu, nvd, eta;
    for (int i = 0; i < 4; ++i) {
      nu(i) = dist(rng);
      nvd(i) = dist(rng);
      eta(i) = dist(rng);
    }
    const Eigen::Vector4d via_regressor = rov_regressor(nu, nvd, eta) * sigma;
    const Eigen::Vector4d direct = reduced_lhs(nu, nvd, p);
    CHECK((via_regressor - direct).cwiseAbs().maxCoeff() <
          1e-10 * std::max(1.0, direct.norm()));
  }
}

TEST_CASE("rov_regressor: zero arguments leave only the restoring row") {
  const RovParams p;
  const Eigen::Vector4d out =
      rov_regressor(Eigen::Vector4d::Zero(), Eigen::Vector4d::Zero(),
                    Eigen::Vector4d::Zero()) *
      p.sigma();
  CHECK(out(0) == 0.0);
  CHECK(out(1) == 0.0);
  CHECK(out(2) == doctest::Approx(-(p.weight - p.buoyancy)));
  CHECK(out(3) == 0.0);
  // the W - B column multiplies the heave row's unit entry
  CHECK(rov_regressor(Eigen::Vector4d::Zero(), Eigen::Vector4d::Zero(),
                      Eigen::Vector4d::Zero())(2, 9) == doctest::Approx(-1.0));
}

TEST_CASE("rov: damping dissipates kinetic energy with no thrust") {
  const RovParams p;
  RovState s;
  s.nu << 0.8, -0.5, 0.4, 0.3;
  const Eigen::Matrix4d m = p.inertia();
  double energy = 0.5 * s.nu.dot(m * s.nu);
  const double dt = 0.01;
  for (int k = 0; k < 1000; ++k) {  // 10 s
    // RK4 on the coupled (eta, nu) state
    const auto f = [&](const RovState& st) { return rov_deriv(st, Eigen::Vector4d::Zero(), p); };
    const RovDeriv k1 = f(s);
    RovState s2{s.eta + 0.5 * dt * k1.eta_dot, s.nu + 0.5 * dt * k1.nu_dot};
    const RovDeriv k2 = f(s2);
    RovState s3{s.eta + 0.5 * dt * k2.eta_dot, s.nu + 0.5 * dt * k2.nu_dot};
    const RovDeriv k3 = f(s3);
    RovState s4{s.eta + dt * k3.eta_dot, s.nu + dt * k3.nu_dot};
    const RovDeriv k4 = f(s4);
    s.eta += (dt / 6.0) * (k1.eta_dot + 2 * k2.eta_dot + 2 * k3.eta_dot + k4.eta_dot);
    s.nu += (dt / 6.0) * (k1.nu_dot + 2 * k2.nu_dot + 2 * k3.nu_dot + k4.nu_dot);
    const double next = 0.5 * s.nu.dot(m * s.nu);
    CHECK(next <= energy + 1e-12);
    energy = next;
  }
  CHECK(energy < 1e-3);  // essentially at rest after 10 s
}

TEST_CASE("rov state normalization wraps the heading") {
  RovState s;
  s.eta << 0, 0, 0, 3.0 * M_PI;
  CHECK(s.normalized().eta(3) == doctest::Approx(M_PI));
  s.eta(3) = -3.5 * M_PI;
  CHECK(s.normalized().eta(3) == doctest::Approx(0.5 * M_PI));
}

TEST_CASE("embedding: structure and kinematic consistency") {
  const RovParams rp;
  const PlantParams plant = embed_strict_feedback(rp);
  CHECK(plant.n == 2);
  CHECK(plant.m == 4);
  CHECK(plant.p == 13);

  // phi_1 == 0 by construction
  CHECK(plant.regressor(1, Eigen::Vector4d{0.1, -0.2, 0.3, 0.4}).cwiseAbs().maxCoeff() ==
        0.0);

  // beta(0) = M^{-1}
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(8);
  CHECK((plant.input_map(x0) - rp.inertia().inverse()).cwiseAbs().maxCoeff() < 1e-15);

  std::mt19937 rng(8);
  std::uniform_real_distribution<double> dist(-1.5, 1.5);
  for (int trial = 0; trial < 200; ++trial) {
    RovState s;
    for (int i = 0; i < 4; ++i) {
      s.eta(i) = dist(rng);
      s.nu(i) = dist(rng);
    }
    Eigen::Vector4d tau;
    for (int i = 0; i < 4; ++i) tau(i) = 1000.0 * dist(rng);

    // round trip (eta, nu) -> (x1, x2) -> (eta, nu)
    const Eigen::Matrix4d j = rov_rotation(s.eta(3));
    Eigen::VectorXd x(8);
    x.head(4) = s.eta;
    x.tail(4) = j * s.nu;
    const Eigen::Vector4d nu_back = j.transpose() * x.tail(4);
    CHECK((nu_back - s.nu).cwiseAbs().maxCoeff() < 1e-12);

    // x2' from the embedded plant equals d/dt (J nu) from the native model
    const Eigen::VectorXd dx = plant_deriv(x, tau, plant);
    const RovDeriv native = rov_deriv(s, tau, rp);
    const double psi_dot = native.eta_dot(3);
    Eigen::Matrix4d jdot = Eigen::Matrix4d::Zero();
    jdot(0, 0) = -std::sin(s.eta(3)) * psi_dot;
    jdot(0, 1) = -std::cos(s.eta(3)) * psi_dot;
    jdot(1, 0) = std::cos(s.eta(3)) * psi_dot;
    jdot(1, 1) = -std::sin(s.eta(3)) * psi_dot;
    const Eigen::Vector4d x2_dot_native = jdot * s.nu + j * native.nu_dot;

    CHECK((dx.head(4) - native.eta_dot).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((dx.tail(4) - x2_dot_native).cwiseAbs().maxCoeff() <
          1e-10 * std::max(1.0, x2_dot_native.norm()));
  }
}

TEST_CASE("presets: the three Section-7 cases") {
  const ScenarioConfig c1 = preset_case(1);
  CHECK(c1.nodes.size() == 4);
  CHECK(c1.security_enabled);
  for (const NodeConfig& nc : c1.nodes) CHECK(nc.attack.kind == AttackKind::none);
  CHECK(c1.horizon == doctest::Approx(80.0));
  CHECK(c1.arr == ArrMode::r_only);

  const ScenarioConfig c2 = preset_case(2);
  CHECK_FALSE(c2.security_enabled);
  CHECK(c2.nodes[3].attack.kind == AttackKind::paper_exponential);
  CHECK(c2.nodes[3].attack.onset == doctest::Approx(30.0));

  const ScenarioConfig c3 = preset_case(3);
  CHECK(c3.security_enabled);
  CHECK(c3.nodes[3].attack.kind == AttackKind::paper_exponential);
  CHECK(c3.nodes[3].y_s.cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(preset_case(0), std::invalid_argument);
  CHECK_THROWS_AS(preset_case(4), std::invalid_argument);

  // initial poses carry the printed values
  CHECK(c1.nodes[1].x0(3) == doctest::Approx(-M_PI / 6.0));
  CHECK(c1.nodes[2].x0(3) == doctest::Approx(-M_PI / 8.0));
}
