#include "docsim/monitor.hpp"

#include <cmath>
#include <stdexcept>

namespace docsim {

void ThresholdParams::validate() const {
  if (!(k0 > 0.0) || !(kb > 0.0) || !(c > 0.0)) {
    throw std::invalid_argument("thresholds: funnel constants must be positive");
  }
  if (c == eta_j) {
    throw std::invalid_argument("thresholds: c equals eta_j (closed form has a pole)");
  }
  if (c == w_nj) {
    throw std::invalid_argument("thresholds: c equals w_Nj (closed form has a pole)");
  }
}

FilterDeriv filter_deriv(const MonitorState& ms, int j,
                         const std::vector<Eigen::VectorXd>& y_recv,
                         const Eigen::VectorXd& v_own,
                         const Eigen::VectorXd& vtilde, const Objective& obj,
                         double eta, const Graph& g,
                         const std::vector<int>* effective) {
  const std::vector<int>& nbrs = effective ? *effective : g.neighbors(j);
  if (!effective && nbrs.empty()) {
    throw std::invalid_argument("filter_deriv: isolated node " + std::to_string(j));
  }
  const int m = static_cast<int>(ms.y_r_hat.size());
  Eigen::VectorXd est_gap = Eigen::VectorXd::Zero(m);  // sum w (y_r_hat - y_i)
  double w_sum = 0.0;
  for (int i : nbrs) {
    const double w = g.weight(j, i);
    est_gap += w * (ms.y_r_hat - y_recv[i]);
    w_sum += w;
  }
  FilterDeriv d;
  d.y_r_hat_dot = -obj.gradient(ms.y_r_hat) - vtilde - (1.0 + eta) * est_gap;
  d.v_hat_dot = est_gap + w_sum * (v_own - ms.v_hat);
  return d;
}

double psi(double a, const SampledNorms& h, double t0, double t) {
  if (h.values.empty()) throw std::invalid_argument("psi: empty trace");
  const auto idx = [&](double tt) {
    const double r = (tt - h.t_start) / h.dt;
    const auto k = static_cast<long>(std::lround(r));
    if (k < 0 || k >= static_cast<long>(h.values.size())) {
      throw std::invalid_argument("psi: time off the sampled grid");
    }
    return k;
  };
  const long k0 = idx(t0);
  const long k1 = idx(t);
  const double decay = std::exp(-a * h.dt);
  double acc = 0.0;
  for (long k = k0; k < k1; ++k) {
    acc = decay * acc +
          a * 0.5 * h.dt * (decay * h.values[k] + h.values[k + 1]);
  }
  return acc;
}

double psi_bar_z(const ThresholdParams& tp, double a, double t0, double t) {
  const double span = t - t0;
  return tp.kb * (1.0 - std::exp(-a * span)) +
         a * tp.k0 / (a - tp.c) *
             (std::exp(-tp.c * t) - std::exp(-a * span - tp.c * t0));
}

double threshold_r(const ThresholdParams& tp, double t) {
  return std::exp(-tp.eta_j * t) * tp.e_r0 + psi_bar_z(tp, tp.eta_j, 0.0, t);
}

double threshold_v(const ThresholdParams& tp, double t) {
  const double a = tp.w_nj;
  const double c = tp.c;
  return std::exp(-a * t) * tp.e_v0 + 2.0 * tp.kb * (1.0 - std::exp(-a * t)) +
         (2.0 * a - c) * a * tp.k0 / ((a - c) * (a - c)) *
             (std::exp(-c * t) - std::exp(-a * t)) +
         a * (tp.kb + a * tp.k0 / (a - c) + tp.e_r0) * t * std::exp(-a * t);
}

ArrResult arr_check(double e_r_norm, double thr_r, double e_v_norm, double thr_v,
                    ArrMode mode) {
  ArrResult r;
  r.ok_r = e_r_norm <= thr_r;
  r.ok_v = e_v_norm <= thr_v;
  switch (mode) {
    case ArrMode::either: r.alarm = !r.ok_r || !r.ok_v; break;
    case ArrMode::both_violated: r.alarm = !r.ok_r && !r.ok_v; break;
    case ArrMode::r_only: r.alarm = !r.ok_r; break;
    case ArrMode::v_only: r.alarm = !r.ok_v; break;
  }
  return r;
}

std::optional<double> detection_time(const std::vector<std::uint8_t>& alarms,
                                     double t_start, double dt) {
  for (std::size_t k = 0; k < alarms.size(); ++k) {
    if (alarms[k]) return t_start + static_cast<double>(k) * dt;
  }
  return std::nullopt;
}

namespace {

// Trapezoid of e^{a (t - t_end)} * f(t) over [t_a, t_d] on the grid.
template <typename F>
double weighted_trapezoid(double a, double t_start, double dt, long k_a, long k_d,
                          double t_end, F&& f) {
  double acc = 0.0;
  for (long k = k_a; k < k_d; ++k) {
    const double ta = t_start + static_cast<double>(k) * dt;
    const double tb = ta + dt;
    acc += 0.5 * dt *
           (std::exp(a * (ta - t_end)) * f(k) + std::exp(a * (tb - t_end)) * f(k + 1));
  }
  return acc;
}

}  // namespace

DetectabilityMargin detectability_margin(const DetectabilityInputs& in,
                                         const ThresholdParams& tp, double t_a,
                                         double t_d) {
  if (in.attack.empty() || in.dt <= 0.0) {
    throw std::invalid_argument("detectability_margin: empty inputs");
  }
  const auto idx = [&](double tt) {
    const auto k = static_cast<long>(std::lround((tt - in.t_start) / in.dt));
    if (k < 0 || k >= static_cast<long>(in.attack.size())) {
      throw std::invalid_argument("detectability_margin: time off the grid");
    }
    return k;
  };
  const long k_a = idx(t_a);
  const long k_d = idx(t_d);
  if (k_d <= k_a) {
    throw std::invalid_argument("detectability_margin: requires T_a < T_d");
  }

  const int m = static_cast<int>(in.attack[0].size());
  DetectabilityMargin out;

  for (int pass = 0; pass < 2; ++pass) {
    const double a = pass == 0 ? tp.eta_j : tp.w_nj;

    Eigen::VectorXd vec_int = Eigen::VectorXd::Zero(m);
    for (long k = k_a; k < k_d; ++k) {
      const double ta = in.t_start + static_cast<double>(k) * in.dt;
      const double tb = ta + in.dt;
      vec_int += 0.5 * in.dt *
                 (std::exp(a * (ta - t_d)) * in.attack[k] +
                  std::exp(a * (tb - t_d)) * in.attack[k + 1]);
    }
    const double lhs = a * vec_int.norm();

    double rhs;
    if (pass == 0) {
      rhs = 2.0 * std::exp(a * (t_a - t_d)) * in.e_r[k_a].norm() +
            psi_bar_z(tp, a, t_a, t_d) +
            a * weighted_trapezoid(a, in.t_start, in.dt, k_a, k_d, t_d, [&](long k) {
              return (in.grad_gap[k] + a * in.z1[k]).norm();
            });
      out.lhs_r = lhs;
      out.rhs_r = rhs;
    } else {
      // Lemma-4(b)-shaped bound integrand: self-contained e_r envelope at
      // rate a plus the funnel envelope.
      const auto ez_bound = [&](double tt) {
        const double e_env = std::exp(-a * tt) * tp.e_r0 + psi_bar_z(tp, a, 0.0, tt);
        return e_env + tp.k0 * std::exp(-tp.c * tt) + tp.kb;
      };
      double psi_ez = 0.0;
      for (long k = k_a; k < k_d; ++k) {
        const double ta = in.t_start + static_cast<double>(k) * in.dt;
        const double tb = ta + in.dt;
        psi_ez += 0.5 * in.dt *
                  (std::exp(a * (ta - t_d)) * ez_bound(ta) +
                   std::exp(a * (tb - t_d)) * ez_bound(tb));
      }
      rhs = 2.0 * std::exp(a * (t_a - t_d)) * in.e_v[k_a].norm() + a * psi_ez +
            a * weighted_trapezoid(a, in.t_start, in.dt, k_a, k_d, t_d, [&](long k) {
              return (in.e_r[k] + in.z1[k]).norm();
            });
      out.lhs_v = lhs;
      out.rhs_v = rhs;
    }
  }
  return out;
}

}  // namespace docsim
