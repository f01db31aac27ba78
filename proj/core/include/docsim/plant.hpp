#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

namespace docsim {

/// Parametric strict-feedback chain of order n with m-dimensional blocks:
///
///   x_i'   = x_{i+1} + phi_i(xbar_i) theta        i = 1..n-1
///   x_n'   = beta(x) u + phi_n(x) theta + drift(x)
///   y      = x_1 + a(t)
///
/// theta (p-vector) is unknown to controllers and known to the simulator.
/// `drift` is a known additive term on the last block (zero by default);
/// the ROV embedding uses it to carry the exactly-known kinematic term.
struct PlantParams {
  int n = 2;
  int m = 1;
  int p = 0;

  /// phi_stage(xbar) with stage in 1..n; xbar is vec(x_1..x_stage)
  /// (stage*m entries). Returns an m x p matrix.
  std::function<Eigen::MatrixXd(int stage, const Eigen::VectorXd& xbar)> regressor;

  /// Optional analytic d/dx_k [ phi_stage(xbar) * theta_hat ] (m x m), with
  /// k in 1..stage. When absent the controller falls back to central finite
  /// differences with step 1e-6.
  std::function<Eigen::MatrixXd(int stage, const Eigen::VectorXd& xbar, int k,
                                const Eigen::VectorXd& theta_hat)>
      regressor_theta_jacobian;

  /// Nonsingular input map evaluated at the current full state.
  std::function<Eigen::MatrixXd(const Eigen::VectorXd& x)> input_map;

  /// Known additive term on block n (default zero).
  std::function<Eigen::VectorXd(const Eigen::VectorXd& x)> drift;

  Eigen::VectorXd theta_true;

  Eigen::VectorXd block(const Eigen::VectorXd& x, int stage) const {
    return x.segment((stage - 1) * m, m);
  }
};

/// Zero-regressor chain of integrators (phi = 0, beta = I, p = 0).
PlantParams integrator_chain(int n, int m);

/// n=2 plant with bounded trigonometric regressors in both stages (p = 2)
/// and analytic stage-1 Jacobian; used by the generic randomized scenarios.
PlantParams bounded_trig_plant(int m, const Eigen::VectorXd& theta);

enum class AttackKind { none, paper_exponential, l2_decaying, custom };

/// Read-only view of the full simulator state offered to attack signals
/// (the adversary may read states, inputs and monitor internals).
struct AttackContext {
  double t = 0.0;
  const std::vector<Eigen::VectorXd>* x = nullptr;
  const std::vector<Eigen::VectorXd>* y_r = nullptr;
  const std::vector<Eigen::VectorXd>* v = nullptr;
  const std::vector<Eigen::VectorXd>* y_r_hat = nullptr;
  const std::vector<Eigen::VectorXd>* v_hat = nullptr;
};

/// Sensor-channel attack a(t) = kappa(t - T_a) * signal(...), with
/// kappa(r) = 0 for r < 0 and 1 otherwise.
struct AttackScript {
  AttackKind kind = AttackKind::none;
  double onset = 0.0;      ///< T_a (s)
  double amplitude = 1.0;  ///< per-component scale
  double rate = 0.3;       ///< decay rate of the l2_decaying kind

  /// Custom signal; receives the snapshot and r = t - T_a.
  std::function<Eigen::VectorXd(const AttackContext&, double r)> signal;

  /// Attack vector at time t (zero before onset).
  Eigen::VectorXd evaluate(const AttackContext& ctx, double t, int m) const;
};

/// State derivative of the chain (n*m vector). Throws DivergenceError if
/// the result is not finite.
Eigen::VectorXd plant_deriv(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                            const PlantParams& p);

/// Sensor output y = x_1 + a(t).
Eigen::VectorXd sensor_output(const Eigen::VectorXd& x, const PlantParams& p,
                              const AttackScript& atk, const AttackContext& ctx,
                              double t);

}  // namespace docsim
