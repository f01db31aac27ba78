#pragma once

#include <Eigen/Dense>
#include <vector>

#include "docsim/cyber.hpp"
#include "docsim/plant.hpp"

namespace docsim {

/// Online parameter estimates of one inner-loop controller.
/// lambda_hat estimates [theta; mu] (p+1 entries), rho_hat and pi_hat the
/// analysis constants rho and pi = sum_{i in N_j}(v*_j - v*_i).
struct AdaptiveState {
  Eigen::VectorXd lambda_hat;
  double rho_hat = 0.0;
  Eigen::VectorXd pi_hat;

  static AdaptiveState zero(int p, int m) {
    return {Eigen::VectorXd::Zero(p + 1), 0.0, Eigen::VectorXd::Zero(m)};
  }
};

struct ControlGains {
  std::vector<double> c;   ///< c_1..c_n, all positive
  Eigen::MatrixXd Gamma;   ///< (p+1)x(p+1) positive definite
  double gamma0 = 1.0;
  double gamma1 = 1.0;
};

/// Prescribed performance funnel delta(t) = (k0 e^{-c (t-t0)} + kb)/sqrt(m).
/// The anchor t0 is re-set when a quarantined node switches to its secure
/// setpoint and the tracking error jumps.
struct Funnel {
  double k0 = 1.0;
  double kb = 0.05;
  double c = 0.5;
  double t0 = 0.0;
};

double funnel_value(const Funnel& f, int m, double t);

/// Componentwise barrier S(r) = (1/2) ln((1+r)/(1-r)) with r = z1_s/delta.
/// Throws FunnelViolation when any |r| >= 1 - 1e-12; node/t only label the
/// diagnostic.
Eigen::VectorXd s_funnel(const Eigen::VectorXd& z1, double delta,
                         int node = -1, double t = 0.0);

struct OuterControl {
  Eigen::VectorXd u_O;
  std::vector<Eigen::VectorXd> alpha_O;  ///< alpha_{1..n-1,O}
};

/// Command-tracking outer loop:
///   alpha_{1,O} = -grad - 2 vtilde
///   alpha_{i,O} = -(d alpha_{i-1,O}/d y_r)(grad + vtilde)
///   u_O         = -beta^{-1}(d alpha_{n-1,O}/d y_r)(grad + vtilde)
/// The derivative recursion uses the objective Hessian at cmd.y_r; for
/// n > 2 it assumes the Hessian is constant (exact for the built-in
/// quadratics, and exact for any objective when n = 2).
OuterControl outer_control(const Command& cmd, const Eigen::MatrixXd& hessian,
                           const PlantParams& p, const Eigen::VectorXd& x);

struct InnerControl {
  Eigen::VectorXd u_I;
  std::vector<Eigen::VectorXd> alpha_I;  ///< alpha_{1..n-1,I}
  std::vector<Eigen::MatrixXd> omega;    ///< omega_1..omega_n, m x (p+1)
  Eigen::VectorXd tau_n;                 ///< tuning function (p+1)
  std::vector<Eigen::VectorXd> z;        ///< z_1..z_n
};

/// Adaptive stabilizing inner loop (tuning-function backstepping with the
/// funnel barrier on the first error). `alpha_O` are the outer-loop
/// virtual controls of the same instant; the total virtual control
/// alpha_i = alpha_{i,I} + alpha_{i,O} defines z_{i+1}.
///
/// For n = 2 all partial derivatives are closed-form (the regressor
/// Jacobian comes from PlantParams or a central finite difference); for
/// n > 2 the alpha derivatives are evaluated by central finite
/// differences with step 1e-6, an explicit approximation.
InnerControl inner_control(const Eigen::VectorXd& x, const AdaptiveState& a,
                           const Command& cmd, const ControlGains& gains,
                           const Funnel& f, const PlantParams& p, double t,
                           const std::vector<Eigen::VectorXd>& alpha_O,
                           int node = -1);

struct AdaptiveDeriv {
  Eigen::VectorXd lambda_hat_dot;
  double rho_hat_dot = 0.0;
  Eigen::VectorXd pi_hat_dot;
};

/// Update laws: lambda_hat' = Gamma tau_n, rho_hat' = gamma0 ||z1||^2,
/// pi_hat' = -gamma1 z1.
AdaptiveDeriv adaptive_deriv(const AdaptiveState& a, const Eigen::VectorXd& tau_n,
                             const Eigen::VectorXd& z1, const ControlGains& gains);

inline Eigen::VectorXd total_control(const Eigen::VectorXd& u_I,
                                     const Eigen::VectorXd& u_O) {
  return u_I + u_O;
}

}  // namespace docsim
