#include "docsim/plant.hpp"

#include <cmath>

#include "docsim/errors.hpp"

namespace docsim {

PlantParams integrator_chain(int n, int m) {
  PlantParams p;
  p.n = n;
  p.m = m;
  p.p = 0;
  p.regressor = [m](int, const Eigen::VectorXd&) {
    return Eigen::MatrixXd::Zero(m, 0);
  };
  p.regressor_theta_jacobian = [m](int, const Eigen::VectorXd&, int,
                                   const Eigen::VectorXd&) {
    return Eigen::MatrixXd::Zero(m, m);
  };
  p.input_map = [m](const Eigen::VectorXd&) {
    return Eigen::MatrixXd::Identity(m, m);
  };
  p.theta_true = Eigen::VectorXd::Zero(0);
  return p;
}

PlantParams bounded_trig_plant(int m, const Eigen::VectorXd& theta) {
  PlantParams p;
  p.n = 2;
  p.m = m;
  p.p = 2;
  p.theta_true = theta;
  // Stage 1 depends on x1 only, stage 2 on x2; columns stay bounded so the
  // randomized scenarios cannot be destabilized by the regressor itself.
  p.regressor = [m](int stage, const Eigen::VectorXd& xbar) -> Eigen::MatrixXd {
    Eigen::MatrixXd phi(m, 2);
    const Eigen::VectorXd xs = xbar.tail(m);  // own-stage block
    for (int s = 0; s < m; ++s) {
      if (stage == 1) {
        phi(s, 0) = 0.5 * std::sin(xs(s));
        phi(s, 1) = 0.3 * std::cos(2.0 * xs(s));
      } else {
        phi(s, 0) = 0.4 * std::cos(xs(s));
        phi(s, 1) = 0.5 * std::sin(xs(s));
      }
    }
    return phi;
  };
  p.regressor_theta_jacobian =
      [m](int stage, const Eigen::VectorXd& xbar, int k,
          const Eigen::VectorXd& th) -> Eigen::MatrixXd {
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(m, m);
    if (stage != k) return jac;  // phi_stage depends on its own block only
    const Eigen::VectorXd xs = xbar.tail(m);
    for (int s = 0; s < m; ++s) {
      if (stage == 1) {
        jac(s, s) = 0.5 * std::cos(xs(s)) * th(0) - 0.6 * std::sin(2.0 * xs(s)) * th(1);
      } else {
        jac(s, s) = -0.4 * std::sin(xs(s)) * th(0) + 0.5 * std::cos(xs(s)) * th(1);
      }
    }
    return jac;
  };
  p.input_map = [m](const Eigen::VectorXd&) {
    return Eigen::MatrixXd::Identity(m, m);
  };
  return p;
}

Eigen::VectorXd AttackScript::evaluate(const AttackContext& ctx, double t,
                                       int m) const {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(m);
  const double r = t - onset;
  if (kind == AttackKind::none || r < 0.0) return a;
  switch (kind) {
    case AttackKind::paper_exponential: {
      // e^{0.5 (t - T_a) - 1} [sin t, cos t, -sin t, -cos t, ...]
      const double env = amplitude * std::exp(0.5 * r - 1.0);
      for (int s = 0; s < m; ++s) {
        switch (s % 4) {
          case 0: a(s) = env * std::sin(t); break;
          case 1: a(s) = env * std::cos(t); break;
          case 2: a(s) = -env * std::sin(t); break;
          default: a(s) = -env * std::cos(t); break;
        }
      }
      break;
    }
    case AttackKind::l2_decaying:
      a.setConstant(amplitude * std::exp(-rate * r));
      break;
    case AttackKind::custom:
      a = signal(ctx, r);
      break;
    default:
      break;
  }
  return a;
}

Eigen::VectorXd plant_deriv(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                            const PlantParams& p) {
  const int n = p.n;
  const int m = p.m;
  Eigen::VectorXd dx(n * m);
  for (int stage = 1; stage < n; ++stage) {
    const Eigen::VectorXd xbar = x.head(stage * m);
    dx.segment((stage - 1) * m, m) =
        x.segment(stage * m, m) + p.regressor(stage, xbar) * p.theta_true;
  }
  dx.tail(m) = p.input_map(x) * u + p.regressor(n, x) * p.theta_true;
  if (p.drift) dx.tail(m) += p.drift(x);
  if (!dx.allFinite()) {
    throw DivergenceError(0.0, "plant derivative");
  }
  return dx;
}

Eigen::VectorXd sensor_output(const Eigen::VectorXd& x, const PlantParams& p,
                              const AttackScript& atk, const AttackContext& ctx,
                              double t) {
  return x.head(p.m) + atk.evaluate(ctx, t, p.m);
}

}  // namespace docsim
