#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "docsim/graph.hpp"
#include "docsim/objective.hpp"

namespace docsim {

/// Per-node monitoring filter state. The residuals are e_r = y_r - y_r_hat
/// and e_v = v - v_hat; the alarm latches permanently once raised.
struct MonitorState {
  Eigen::VectorXd y_r_hat;
  Eigen::VectorXd v_hat;
  bool alarmed = false;
  std::optional<double> t_detect;
};

/// Constants of the closed-form adaptive thresholds.
struct ThresholdParams {
  double omega_bar = 50.0;  ///< sup of V(0) over the admissible parameter set
  double c1 = 2.0;          ///< node's first backstepping gain
  double eta_j = 0.0;       ///< (1 + eta) * w_Nj
  double w_nj = 0.0;        ///< sum of incident edge weights
  double k0 = 1.0;          ///< funnel constants
  double kb = 0.05;
  double c = 0.5;
  double e_r0 = 0.0;        ///< initial residual norms
  double e_v0 = 0.0;

  /// Throws std::invalid_argument when c collides with either rate (the
  /// closed forms have poles at c = a).
  void validate() const;
};

struct FilterDeriv {
  Eigen::VectorXd y_r_hat_dot;
  Eigen::VectorXd v_hat_dot;
};

/// Detection filter mirroring the optimizer dynamics on received data:
///   y_r_hat' = -grad g(y_r_hat) - vtilde - (1+eta) sum w_ji (y_r_hat - y_i)
///   v_hat'   = sum w_ji [(y_r_hat - y_i) + (v - v_hat)]
/// Throws std::invalid_argument for an isolated node.
FilterDeriv filter_deriv(const MonitorState& ms, int j,
                         const std::vector<Eigen::VectorXd>& y_recv,
                         const Eigen::VectorXd& v_own,
                         const Eigen::VectorXd& vtilde, const Objective& obj,
                         double eta, const Graph& g,
                         const std::vector<int>* effective = nullptr);

/// Uniformly sampled scalar trace (norms of a signal on the run grid).
struct SampledNorms {
  double t_start = 0.0;
  double dt = 0.0;
  std::vector<double> values;
};

/// Psi(a, h, t0, t) = a * integral_{t0}^{t} e^{a (tau - t)} h(tau) dtau,
/// evaluated with exact subinterval exponentials and trapezoidal values.
/// t0 and t must lie on the sample grid; throws on an empty trace.
double psi(double a, const SampledNorms& h, double t0, double t);

/// Closed-form bound on the funnel-constrained Psi sup (Lemma-4(a) shape),
/// anchored at t0: sup over ||h(tau)|| <= k0 e^{-c tau} + kb.
double psi_bar_z(const ThresholdParams& tp, double a, double t0, double t);

/// thr_r(t) = e^{-eta_j t} e_r0 + psi_bar_z(eta_j, 0, t).
double threshold_r(const ThresholdParams& tp, double t);

/// thr_v(t) = e^{-w_Nj t} e_v0 + the Lemma-4(b) closed form with a = w_Nj.
double threshold_v(const ThresholdParams& tp, double t);

enum class ArrMode : std::uint8_t { either, both_violated, r_only, v_only };

struct ArrResult {
  bool ok_r = true;
  bool ok_v = true;
  bool alarm = false;
};

/// Analytical redundancy relation; the boundary is inclusive (a residual
/// exactly at its threshold does not alarm).
ArrResult arr_check(double e_r_norm, double thr_r, double e_v_norm, double thr_v,
                    ArrMode mode = ArrMode::either);

/// First grid instant with a latched alarm; absent when none.
std::optional<double> detection_time(const std::vector<std::uint8_t>& alarms,
                                     double t_start, double dt);

/// Signals needed to evaluate the detectability inequalities numerically.
struct DetectabilityInputs {
  double t_start = 0.0;
  double dt = 0.0;
  std::vector<Eigen::VectorXd> attack;    ///< a(t)
  std::vector<Eigen::VectorXd> grad_gap;  ///< grad g(y_r) - grad g(y_r_hat)
  std::vector<Eigen::VectorXd> z1;        ///< x_1 - y_r
  std::vector<Eigen::VectorXd> e_r;
  std::vector<Eigen::VectorXd> e_v;
};

struct DetectabilityMargin {
  double lhs_r = 0.0, rhs_r = 0.0;
  double lhs_v = 0.0, rhs_v = 0.0;
  bool detectable() const { return lhs_r > rhs_r || lhs_v > rhs_v; }
};

/// Quadrature evaluation of both detectable-attack inequalities over
/// [T_a, T_d]. Throws when the interval leaves the sampled grid.
DetectabilityMargin detectability_margin(const DetectabilityInputs& in,
                                         const ThresholdParams& tp, double t_a,
                                         double t_d);

}  // namespace docsim
