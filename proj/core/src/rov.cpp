#include "docsim/rov.hpp"

#include <cmath>

#include "docsim/errors.hpp"

namespace docsim {

Eigen::Matrix4d RovParams::inertia() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(0, 0) = m_v - x_du;
  m(1, 1) = m_v - y_dv;
  m(2, 2) = m_v - z_dw;
  m(3, 3) = i_z - n_dr;
  return m;
}

Eigen::VectorXd RovParams::sigma() const {
  Eigen::VectorXd s(13);
  s << m_v - x_du, m_v - y_dv, x_u, x_uu, y_v, y_vv, m_v - z_dw, z_w, z_ww,
      weight - buoyancy, i_z - n_dr, n_r, n_rr;
  return s;
}

RovState RovState::normalized() const {
  RovState out = *this;
  double psi = out.eta(3);
  psi = std::remainder(psi, 2.0 * M_PI);  // (-pi, pi], up to the -pi edge
  if (psi <= -M_PI) psi += 2.0 * M_PI;
  out.eta(3) = psi;
  return out;
}

Eigen::Matrix4d rov_rotation(double psi) {
  const double cp = std::cos(psi);
  const double sp = std::sin(psi);
  Eigen::Matrix4d j = Eigen::Matrix4d::Identity();
  j(0, 0) = cp;
  j(0, 1) = -sp;
  j(1, 0) = sp;
  j(1, 1) = cp;
  return j;
}

Eigen::Matrix4d rov_coriolis(const Eigen::Vector4d& nu, const RovParams& p) {
  const double m11 = p.m_v - p.x_du;
  const double m22 = p.m_v - p.y_dv;
  Eigen::Matrix4d c = Eigen::Matrix4d::Zero();
  c(0, 3) = -m22 * nu(1);
  c(1, 3) = m11 * nu(0);
  c(3, 0) = m22 * nu(1);
  c(3, 1) = -m11 * nu(0);
  return c;
}

namespace {

// D(nu) nu with D(nu) = -diag{X_u + X_uu|u|, ...}.
Eigen::Vector4d damping_times_nu(const Eigen::Vector4d& nu, const RovParams& p) {
  Eigen::Vector4d d;
  d(0) = -(p.x_u + p.x_uu * std::abs(nu(0))) * nu(0);
  d(1) = -(p.y_v + p.y_vv * std::abs(nu(1))) * nu(1);
  d(2) = -(p.z_w + p.z_ww * std::abs(nu(2))) * nu(2);
  d(3) = -(p.n_r + p.n_rr * std::abs(nu(3))) * nu(3);
  return d;
}

Eigen::Vector4d restoring(const RovParams& p) {
  return Eigen::Vector4d(0.0, 0.0, -(p.weight - p.buoyancy), 0.0);
}

}  // namespace

RovDeriv rov_deriv(const RovState& s, const Eigen::Vector4d& tau,
                   const RovParams& p) {
  RovDeriv d;
  d.eta_dot = rov_rotation(s.eta(3)) * s.nu;
  const Eigen::Vector4d rhs = tau - rov_coriolis(s.nu, p) * s.nu -
                              damping_times_nu(s.nu, p) - restoring(p);
  d.nu_dot = p.inertia().inverse() * rhs;
  if (!d.eta_dot.allFinite() || !d.nu_dot.allFinite()) {
    throw DivergenceError(0.0, "rov derivative");
  }
  return d;
}

Eigen::MatrixXd rov_regressor(const Eigen::Vector4d& nu,
                              const Eigen::Vector4d& nu_v_dot,
                              const Eigen::Vector4d& eta) {
  (void)eta;  // the reduced restoring term is pose-independent
  const double u = nu(0), v = nu(1), w = nu(2), r = nu(3);
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(4, 13);
  // surge: s1 nu_v_dot(0) - s2 v r - s3 u - s4 |u| u
  phi(0, 0) = nu_v_dot(0);
  phi(0, 1) = -v * r;
  phi(0, 2) = -u;
  phi(0, 3) = -std::abs(u) * u;
  // sway: s2 nu_v_dot(1) + s1 u r - s5 v - s6 |v| v
  phi(1, 1) = nu_v_dot(1);
  phi(1, 0) = u * r;
  phi(1, 4) = -v;
  phi(1, 5) = -std::abs(v) * v;
  // heave: s7 nu_v_dot(2) - s8 w - s9 |w| w - s10
  phi(2, 6) = nu_v_dot(2);
  phi(2, 7) = -w;
  phi(2, 8) = -std::abs(w) * w;
  phi(2, 9) = -1.0;
  // yaw: s11 nu_v_dot(3) + (s2 - s1) u v - s12 r - s13 |r| r
  phi(3, 10) = nu_v_dot(3);
  phi(3, 1) = u * v;
  phi(3, 0) = -u * v;
  phi(3, 11) = -r;
  phi(3, 12) = -std::abs(r) * r;
  return phi;
}

PlantParams embed_strict_feedback(const RovParams& p) {
  PlantParams plant;
  plant.n = 2;
  plant.m = 4;
  plant.p = 13;
  plant.theta_true = p.sigma();

  const Eigen::Matrix4d m_inv = p.inertia().inverse();

  plant.regressor = [m_inv](int stage, const Eigen::VectorXd& xbar) -> Eigen::MatrixXd {
    if (stage == 1) return Eigen::MatrixXd::Zero(4, 13);
    const Eigen::Vector4d eta = xbar.head(4);
    const Eigen::Vector4d x2 = xbar.tail(4);
    const Eigen::Matrix4d j = rov_rotation(eta(3));
    const Eigen::Vector4d nu = j.transpose() * x2;
    return -j * m_inv * rov_regressor(nu, Eigen::Vector4d::Zero(), eta);
  };
  // phi_1 == 0, so the only Jacobian the n=2 controller needs vanishes.
  plant.regressor_theta_jacobian = [](int stage, const Eigen::VectorXd&, int,
                                      const Eigen::VectorXd&) -> Eigen::MatrixXd {
    (void)stage;
    return Eigen::MatrixXd::Zero(4, 4);
  };
  plant.input_map = [m_inv](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
    return rov_rotation(x(3)) * m_inv;
  };
  // x2' carries the exactly-known kinematic term Jdot nu; Jdot depends only
  // on psi and psi' = (x2)_4.
  plant.drift = [](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const double psi = x(3);
    const Eigen::Vector4d x2 = x.tail(4);
    const double psi_dot = x2(3);
    const Eigen::Vector4d nu = rov_rotation(psi).transpose() * x2;
    Eigen::Matrix4d jdot = Eigen::Matrix4d::Zero();
    const double cp = std::cos(psi);
    const double sp = std::sin(psi);
    jdot(0, 0) = -sp * psi_dot;
    jdot(0, 1) = -cp * psi_dot;
    jdot(1, 0) = cp * psi_dot;
    jdot(1, 1) = -sp * psi_dot;
    return jdot * nu;
  };
  return plant;
}

ScenarioConfig preset_case(int which) {
  if (which < 1 || which > 3) {
    throw std::invalid_argument("preset_case: case must be 1, 2 or 3");
  }

  ScenarioConfig cfg;
  cfg.name = "rov_case" + std::to_string(which);
  cfg.graph.n = 4;
  cfg.graph.edges = {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 0, 1.0}};
  cfg.dt = 0.002;
  cfg.horizon = 80.0;
  cfg.eta = 2.5;
  cfg.arr = ArrMode::r_only;
  cfg.quarantine = QuarantineMode::prune;
  cfg.security_enabled = (which != 2);
  cfg.record_stride = 10;

  const std::vector<Eigen::Vector4d> poses = {
      {0.3, 0.4, 1.0, 0.0},
      {0.1, 0.1, 0.5, -M_PI / 6.0},
      {0.0, 0.0, 0.0, -M_PI / 8.0},
      {0.2, 0.5, 1.0, 0.0},
  };

  for (int j = 0; j < 4; ++j) {
    NodeConfig node;
    node.plant = "rov";
    node.m = 4;
    node.x0 = Eigen::VectorXd::Zero(8);
    node.x0.head(4) = poses[j];  // starts at rest: x2 = J nu = 0
    node.objective_center = poses[j];
    node.c_gains = {15.0, 15.0};
    node.gamma_scale = 1.0;
    node.gamma0 = 1.0;
    node.gamma1 = 1.0;
    node.funnel.k0 = 3.0;
    node.funnel.kb = 0.5;
    node.funnel.c = 0.3;
    node.omega_bar = 50.0;
    node.y_s = Eigen::VectorXd::Zero(4);
    if (which >= 2 && j == 3) {
      node.attack.kind = AttackKind::paper_exponential;
      node.attack.onset = 30.0;
      node.attack.amplitude = 1.0;
    }
    cfg.nodes.push_back(std::move(node));
  }
  return cfg;
}

}  // namespace docsim
