#pragma once

#include <Eigen/Dense>

#include "docsim/plant.hpp"
#include "docsim/scenario.hpp"

namespace docsim {

/// Reduced 4-DOF ROV model constants (surge, sway, heave, yaw).
struct RovParams {
  double m_v = 2500.0;    ///< mass (kg)
  double i_z = 1250.0;    ///< yaw inertia (kg m^2)
  double x_du = -2140.0;  ///< added mass X_udot (kg)
  double y_dv = -1636.0;
  double z_dw = -3000.0;
  double n_dr = -1524.0;  ///< kg m^2
  double x_u = -3610.0;   ///< linear damping (kg/s)
  double y_v = -4660.0;
  double z_w = -11772.0;
  double n_r = -7848.0;   ///< kg m^2/(s rad)
  double x_uu = -952.0;   ///< quadratic damping (kg/m)
  double y_vv = -1361.0;
  double z_ww = -3561.0;
  double n_rr = -773.0;   ///< kg m^2/(s rad)
  double weight = 24525.0;    ///< W (N)
  double buoyancy = 24525.0;  ///< B (N)

  /// M = diag{m - X_udot, m - Y_vdot, m - Z_wdot, I_z - N_rdot}.
  Eigen::Matrix4d inertia() const;

  /// The 13-component unknown parameter vector sigma, in the order
  /// (m-X_du, m-Y_dv, X_u, X_uu, Y_v, Y_vv, m-Z_dw, Z_w, Z_ww, W-B,
  ///  I_z-N_dr, N_r, N_rr).
  Eigen::VectorXd sigma() const;
};

/// Pose (x, y, z, psi) in the earth frame and body velocity (u, v, w, r).
struct RovState {
  Eigen::Vector4d eta = Eigen::Vector4d::Zero();
  Eigen::Vector4d nu = Eigen::Vector4d::Zero();

  /// Copy with psi wrapped to (-pi, pi].
  RovState normalized() const;
};

/// Yaw-only rotation J(eta) of the reduced model.
Eigen::Matrix4d rov_rotation(double psi);

/// Reduced Coriolis/centripetal matrix, skew-symmetric by construction.
Eigen::Matrix4d rov_coriolis(const Eigen::Vector4d& nu, const RovParams& p);

struct RovDeriv {
  Eigen::Vector4d eta_dot;
  Eigen::Vector4d nu_dot;
};

/// eta' = J(eta) nu;  M nu' = tau - C(nu) nu - D(nu) nu - g(eta).
RovDeriv rov_deriv(const RovState& s, const Eigen::Vector4d& tau,
                   const RovParams& p);

/// 4x13 regressor with M nu_v' + C(nu) nu + D(nu) nu + g(eta) =
/// rov_regressor(nu, nu_v_dot, eta) * sigma, exactly.
Eigen::MatrixXd rov_regressor(const Eigen::Vector4d& nu,
                              const Eigen::Vector4d& nu_v_dot,
                              const Eigen::Vector4d& eta);

/// Embedding into the n=2, m=4 strict-feedback form with x1 = eta,
/// x2 = J(eta) nu, input map beta(eta) = J(eta) M^{-1}, unknown-parameter
/// regressor -J M^{-1} Phi(nu, 0, eta) and the exactly-known J' nu term
/// carried as the drift.
PlantParams embed_strict_feedback(const RovParams& p);

/// The three Section-7 scenarios on the 4-ROV ring: 1 attack-free,
/// 2 attacked with the countermeasure disabled, 3 attacked and secured.
ScenarioConfig preset_case(int which);

}  // namespace docsim
