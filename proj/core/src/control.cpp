#include "docsim/control.hpp"

#include <cmath>
#include <stdexcept>

#include "docsim/errors.hpp"

namespace docsim {

double funnel_value(const Funnel& f, int m, double t) {
  return (f.k0 * std::exp(-f.c * (t - f.t0)) + f.kb) / std::sqrt(static_cast<double>(m));
}

Eigen::VectorXd s_funnel(const Eigen::VectorXd& z1, double delta, int node, double t) {
  Eigen::VectorXd s(z1.size());
  for (Eigen::Index i = 0; i < z1.size(); ++i) {
    const double r = z1(i) / delta;
    if (std::abs(r) >= 1.0 - 1e-12) {
      throw FunnelViolation(node, t, static_cast<int>(i), std::abs(z1(i)), delta);
    }
    // log1p pair keeps S exactly odd in floating point
    s(i) = 0.5 * (std::log1p(r) - std::log1p(-r));
  }
  return s;
}

OuterControl outer_control(const Command& cmd, const Eigen::MatrixXd& hessian,
                           const PlantParams& p, const Eigen::VectorXd& x) {
  OuterControl oc;
  const Eigen::VectorXd w = cmd.grad + cmd.v_tilde;

  oc.alpha_O.push_back(-cmd.grad - 2.0 * cmd.v_tilde);
  // d alpha_{i,O}/d y_r, propagated with the constant-Hessian recursion.
  Eigen::MatrixXd d = -hessian;
  for (int i = 2; i <= p.n - 1; ++i) {
    oc.alpha_O.push_back(-d * w);
    d = -d * hessian;
  }

  const Eigen::MatrixXd beta = p.input_map(x);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(beta);
  if (!lu.isInvertible()) {
    throw std::domain_error("outer_control: singular input map");
  }
  oc.u_O = lu.solve(Eigen::VectorXd(-(d * w)));
  return oc;
}

namespace {

struct ChainContext {
  const PlantParams* plant;
  const ControlGains* gains;
  const Command* cmd;
  const Funnel* funnel;
  const std::vector<Eigen::VectorXd>* alpha_O;
  double t;
  int node;
};

constexpr double kFdStep = 1e-6;

// d/dx_k [ phi_stage(xbar) * theta_hat ], analytic when the plant provides
// it, otherwise a central finite difference.
Eigen::MatrixXd regressor_jacobian(const ChainContext& c, int stage,
                                   const Eigen::VectorXd& xbar, int k,
                                   const Eigen::VectorXd& theta_hat) {
  const PlantParams& p = *c.plant;
  if (p.regressor_theta_jacobian) {
    return p.regressor_theta_jacobian(stage, xbar, k, theta_hat);
  }
  const int m = p.m;
  Eigen::MatrixXd jac(m, m);
  Eigen::VectorXd xp = xbar;
  for (int col = 0; col < m; ++col) {
    const Eigen::Index idx = static_cast<Eigen::Index>(k - 1) * m + col;
    const double orig = xp(idx);
    xp(idx) = orig + kFdStep;
    const Eigen::VectorXd fp = p.regressor(stage, xp) * theta_hat;
    xp(idx) = orig - kFdStep;
    const Eigen::VectorXd fm = p.regressor(stage, xp) * theta_hat;
    xp(idx) = orig;
    jac.col(col) = (fp - fm) / (2.0 * kFdStep);
  }
  return jac;
}

struct ChainResult {
  std::vector<Eigen::VectorXd> z;
  std::vector<Eigen::MatrixXd> omega;
  std::vector<Eigen::VectorXd> alpha_I;
  std::vector<Eigen::VectorXd> tau;
  // d alpha_{q,I}/d lambda_hat per computed stage (needed by the tuning
  // cross terms of later stages).
  std::vector<Eigen::MatrixXd> dalpha_dlam;
  Eigen::VectorXd u_pre;  // populated when the chain runs to stage n
};

ChainResult run_chain(int upto, const Eigen::VectorXd& xbar,
                      const Eigen::VectorXd& lambda_hat, double rho_hat,
                      const Eigen::VectorXd& pi_hat, const ChainContext& c);

// alpha_{q,I} as a pure function of the chain arguments; used by the
// finite-difference fallbacks for n > 2.
Eigen::VectorXd alpha_I_at(int q, const Eigen::VectorXd& xbar,
                           const Eigen::VectorXd& lambda_hat, double rho_hat,
                           const Eigen::VectorXd& pi_hat, const ChainContext& c) {
  return run_chain(q, xbar, lambda_hat, rho_hat, pi_hat, c).alpha_I[q - 1];
}

Eigen::MatrixXd fd_dalpha_dx(int q, int k, const Eigen::VectorXd& xbar,
                             const Eigen::VectorXd& lambda_hat, double rho_hat,
                             const Eigen::VectorXd& pi_hat, const ChainContext& c) {
  const int m = c.plant->m;
  Eigen::MatrixXd jac(m, m);
  Eigen::VectorXd xp = xbar;
  for (int col = 0; col < m; ++col) {
    const Eigen::Index idx = static_cast<Eigen::Index>(k - 1) * m + col;
    const double orig = xp(idx);
    xp(idx) = orig + kFdStep;
    const Eigen::VectorXd fp = alpha_I_at(q, xp, lambda_hat, rho_hat, pi_hat, c);
    xp(idx) = orig - kFdStep;
    const Eigen::VectorXd fm = alpha_I_at(q, xp, lambda_hat, rho_hat, pi_hat, c);
    xp(idx) = orig;
    jac.col(col) = (fp - fm) / (2.0 * kFdStep);
  }
  return jac;
}

Eigen::MatrixXd fd_dalpha_dlam(int q, const Eigen::VectorXd& xbar,
                               const Eigen::VectorXd& lambda_hat, double rho_hat,
                               const Eigen::VectorXd& pi_hat, const ChainContext& c) {
  const int m = c.plant->m;
  Eigen::MatrixXd jac(m, lambda_hat.size());
  Eigen::VectorXd lp = lambda_hat;
  for (Eigen::Index col = 0; col < lambda_hat.size(); ++col) {
    const double orig = lp(col);
    lp(col) = orig + kFdStep;
    const Eigen::VectorXd fp = alpha_I_at(q, xbar, lp, rho_hat, pi_hat, c);
    lp(col) = orig - kFdStep;
    const Eigen::VectorXd fm = alpha_I_at(q, xbar, lp, rho_hat, pi_hat, c);
    lp(col) = orig;
    jac.col(col) = (fp - fm) / (2.0 * kFdStep);
  }
  return jac;
}

Eigen::MatrixXd fd_dalpha_dpi(int q, const Eigen::VectorXd& xbar,
                              const Eigen::VectorXd& lambda_hat, double rho_hat,
                              const Eigen::VectorXd& pi_hat, const ChainContext& c) {
  const int m = c.plant->m;
  Eigen::MatrixXd jac(m, m);
  Eigen::VectorXd pp = pi_hat;
  for (int col = 0; col < m; ++col) {
    const double orig = pp(col);
    pp(col) = orig + kFdStep;
    const Eigen::VectorXd fp = alpha_I_at(q, xbar, lambda_hat, rho_hat, pp, c);
    pp(col) = orig - kFdStep;
    const Eigen::VectorXd fm = alpha_I_at(q, xbar, lambda_hat, rho_hat, pp, c);
    pp(col) = orig;
    jac.col(col) = (fp - fm) / (2.0 * kFdStep);
  }
  return jac;
}

ChainResult run_chain(int upto, const Eigen::VectorXd& xbar,
                      const Eigen::VectorXd& lambda_hat, double rho_hat,
                      const Eigen::VectorXd& pi_hat, const ChainContext& c) {
  const PlantParams& plant = *c.plant;
  const ControlGains& gains = *c.gains;
  const int m = plant.m;
  const int p = plant.p;
  const int n = plant.n;
  const Eigen::VectorXd theta_hat = lambda_hat.head(p);

  ChainResult r;

  // Stage 1: funnel-constrained tracking error.
  const Eigen::VectorXd x1 = xbar.head(m);
  const Eigen::VectorXd z1 = x1 - c.cmd->y_r;
  const double delta = funnel_value(*c.funnel, m, c.t);
  const Eigen::VectorXd s = s_funnel(z1, delta, c.node, c.t);

  Eigen::MatrixXd psi1 = Eigen::MatrixXd::Zero(m, p + 1);
  psi1.leftCols(p) = plant.regressor(1, x1);
  const Eigen::MatrixXd omega1 = psi1;

  Eigen::VectorXd alpha1 = -gains.c[0] * z1 - rho_hat * z1 -
                           omega1 * lambda_hat + pi_hat - s;
  r.z.push_back(z1);
  r.omega.push_back(omega1);
  r.alpha_I.push_back(alpha1);
  r.tau.push_back(omega1.transpose() * z1);

  // Closed-form stage-1 derivatives; S'(r) = 1/(1 - r^2).
  auto stage1_dx = [&]() {
    Eigen::MatrixXd d = -(gains.c[0] + rho_hat) * Eigen::MatrixXd::Identity(m, m);
    d -= regressor_jacobian(c, 1, x1, 1, theta_hat);
    for (int sc = 0; sc < m; ++sc) {
      const double rr = z1(sc) / delta;
      d(sc, sc) -= 1.0 / (delta * (1.0 - rr * rr));
    }
    return d;
  };
  r.dalpha_dlam.push_back(-psi1);

  std::vector<Eigen::MatrixXd> psi{psi1};

  const Eigen::VectorXd pi_hat_dot = -gains.gamma1 * z1;

  for (int i = 2; i <= upto; ++i) {
    const Eigen::VectorXd xi = xbar.segment(static_cast<Eigen::Index>(i - 1) * m, m);
    const Eigen::VectorXd alpha_prev = r.alpha_I[i - 2] + (*c.alpha_O)[i - 2];
    const Eigen::VectorXd zi = xi - alpha_prev;

    Eigen::MatrixXd psi_i(m, p + 1);
    psi_i.leftCols(p) = plant.regressor(i, xbar.head(static_cast<Eigen::Index>(i) * m));
    psi_i.rightCols(1) = zi;
    psi.push_back(psi_i);

    // Partial derivatives of alpha_{i-1,I}: closed form at stage 1, central
    // finite differences deeper in the chain.
    std::vector<Eigen::MatrixXd> dprev_dx(i - 1);
    Eigen::MatrixXd dprev_dlam, dprev_dpi;
    if (i - 1 == 1) {
      dprev_dx[0] = stage1_dx();
      dprev_dlam = -psi1;
      dprev_dpi = Eigen::MatrixXd::Identity(m, m);
    } else {
      const Eigen::VectorXd xprev = xbar.head(static_cast<Eigen::Index>(i - 1) * m);
      for (int k = 1; k <= i - 1; ++k) {
        dprev_dx[k - 1] = fd_dalpha_dx(i - 1, k, xprev, lambda_hat, rho_hat, pi_hat, c);
      }
      dprev_dlam = fd_dalpha_dlam(i - 1, xprev, lambda_hat, rho_hat, pi_hat, c);
      dprev_dpi = fd_dalpha_dpi(i - 1, xprev, lambda_hat, rho_hat, pi_hat, c);
      r.dalpha_dlam.push_back(dprev_dlam);
    }

    Eigen::MatrixXd omega_i = psi_i;
    for (int k = 1; k <= i - 1; ++k) {
      omega_i -= dprev_dx[k - 1] * psi[k - 1];
    }
    const Eigen::VectorXd tau_i = r.tau.back() + omega_i.transpose() * zi;

    Eigen::VectorXd lam_i = dprev_dpi * pi_hat_dot;
    for (int k = 1; k <= i - 1; ++k) {
      lam_i += dprev_dx[k - 1] * xbar.segment(static_cast<Eigen::Index>(k) * m, m);
    }
    lam_i += dprev_dlam * (gains.Gamma * tau_i);
    for (int k = 2; k <= i - 1; ++k) {
      lam_i += r.dalpha_dlam[k - 2] * (gains.Gamma * (omega_i.transpose() * r.z[k - 1]));
    }

    r.z.push_back(zi);
    r.omega.push_back(omega_i);
    r.tau.push_back(tau_i);

    const Eigen::VectorXd stabilizer =
        -r.z[i - 2] - gains.c[i - 1] * zi - omega_i * lambda_hat + lam_i;
    if (i < n) {
      r.alpha_I.push_back(stabilizer);
    } else {
      r.u_pre = stabilizer;
    }
  }
  return r;
}

}  // namespace

InnerControl inner_control(const Eigen::VectorXd& x, const AdaptiveState& a,
                           const Command& cmd, const ControlGains& gains,
                           const Funnel& f, const PlantParams& p, double t,
                           const std::vector<Eigen::VectorXd>& alpha_O, int node) {
  ChainContext ctx{&p, &gains, &cmd, &f, &alpha_O, t, node};
  ChainResult chain = run_chain(p.n, x, a.lambda_hat, a.rho_hat, a.pi_hat, ctx);

  InnerControl out;
  out.alpha_I = chain.alpha_I;
  out.omega = chain.omega;
  out.z = chain.z;
  out.tau_n = chain.tau.back();

  Eigen::VectorXd u_pre = chain.u_pre;
  if (p.drift) u_pre -= p.drift(x);

  const Eigen::MatrixXd beta = p.input_map(x);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(beta);
  if (!lu.isInvertible()) {
    throw std::domain_error("inner_control: singular input map");
  }
  out.u_I = lu.solve(u_pre);
  return out;
}

AdaptiveDeriv adaptive_deriv(const AdaptiveState& a, const Eigen::VectorXd& tau_n,
                             const Eigen::VectorXd& z1, const ControlGains& gains) {
  (void)a;
  AdaptiveDeriv d;
  d.lambda_hat_dot = gains.Gamma * tau_n;
  d.rho_hat_dot = gains.gamma0 * z1.squaredNorm();
  d.pi_hat_dot = -gains.gamma1 * z1;
  return d;
}

}  // namespace docsim
