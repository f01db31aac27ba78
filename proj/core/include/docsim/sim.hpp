#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "docsim/control.hpp"
#include "docsim/cyber.hpp"
#include "docsim/monitor.hpp"
#include "docsim/scenario.hpp"
#include "docsim/secure.hpp"
#include "docsim/trace.hpp"

namespace docsim {

/// Classical explicit 4-stage (RK4) update of a generic flat-state ODE.
Eigen::VectorXd rk4_step(
    const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& f,
    double t, const Eigen::VectorXd& s, double dt);

/// Everything one node carries besides its continuous state.
struct NodeRuntime {
  PlantParams plant;
  Objective objective;
  ControlGains gains;
  Funnel funnel;  ///< re-anchored when the node is quarantined
  ThresholdParams thresholds;
  AttackScript attack;
  SecurityConfig security;
};

/// Controller/measurement evaluation of one instant (shared by the ODE
/// right-hand side and the trace recorder).
struct RoundEval {
  std::vector<Eigen::VectorXd> y;       ///< measured outputs (with attacks)
  std::vector<Eigen::VectorXd> vt;      ///< dual disagreements
  std::vector<Command> cmd;             ///< after secure switching
  std::vector<Eigen::VectorXd> u_i, u_o;
  std::vector<Eigen::VectorXd> z1;
  std::vector<Eigen::VectorXd> tau_n;
};

/// The coupled cyber-physical-monitor system of one scenario.
///
/// All continuous couplings are evaluated at every integration stage; the
/// discrete layer (ARR evaluation, alarm latching, notification flags and
/// the Eq.-type command switch) advances only at step boundaries, so the
/// detection time is grid-quantized. Evaluation order is fixed, which makes
/// runs bit-reproducible.
class World {
public:
  explicit World(const ScenarioConfig& cfg);

  /// One synchronous round: boundary discrete update happened already;
  /// integrates the continuous states over [t, t+dt].
  void step();

  /// ARR check, alarm latching and flag/funnel transitions at the current
  /// boundary.
  void discrete_update();

  void append_record(Trace& trace) const;

  double t() const { return t_; }
  int n_nodes() const { return static_cast<int>(nodes_.size()); }
  const Graph& graph() const { return graph_; }
  const ScenarioConfig& config() const { return cfg_; }
  const std::vector<NodeRuntime>& nodes() const { return nodes_; }
  const std::vector<std::uint8_t>& flags() const { return flags_; }
  const std::vector<std::uint8_t>& alarms() const { return alarmed_; }
  const std::vector<std::optional<double>>& detection_times() const { return t_detect_; }
  bool assumption4_ok() const { return assumption4_ok_; }
  double max_state_norm() const { return max_state_norm_; }
  const std::optional<double>& t_norm_exceeded() const { return t_norm_exceeded_; }

  // Continuous-state blocks (mutable access is used by tests and the
  // acceptance rigs to pose the world).
  Eigen::VectorBlock<Eigen::VectorXd> x(int j);
  Eigen::VectorBlock<Eigen::VectorXd> y_r(int j);
  Eigen::VectorBlock<Eigen::VectorXd> v(int j);
  Eigen::VectorBlock<Eigen::VectorXd> y_r_hat(int j);
  Eigen::VectorBlock<Eigen::VectorXd> v_hat(int j);
  Eigen::VectorBlock<Eigen::VectorXd> lambda_hat(int j);
  double& rho_hat(int j);
  Eigen::VectorBlock<Eigen::VectorXd> pi_hat(int j);
  Eigen::VectorXd state_copy() const { return state_; }

  /// Full continuous derivative at (t, s) under the current flags.
  Eigen::VectorXd deriv(double t, const Eigen::VectorXd& s) const;

  /// Measurements, commands and controls at (t, s) under current flags.
  RoundEval eval_round(double t, const Eigen::VectorXd& s) const;

private:
  struct Layout {
    int x = 0, y_r = 0, v = 0, y_hat = 0, v_hat = 0, lam = 0, rho = 0, pi = 0;
  };

  void quarantine(int j);

  ScenarioConfig cfg_;
  Graph graph_;
  std::vector<NodeRuntime> nodes_;
  std::vector<Layout> layout_;
  int dim_ = 0;
  int m_ = 0;

  Eigen::VectorXd state_;
  double t_ = 0.0;
  long step_count_ = 0;

  std::vector<std::uint8_t> alarmed_;
  std::vector<std::uint8_t> flags_;
  std::vector<std::optional<double>> t_detect_;
  RoundView round_view_;
  bool assumption4_ok_ = true;
  double max_state_norm_ = 0.0;
  std::optional<double> t_norm_exceeded_;
};

struct RunResult {
  Trace trace;
  RunReport report;
};

/// Integrates the scenario to its horizon (or to a funnel violation or
/// divergence), recording every `record_stride`-th boundary.
RunResult run(const ScenarioConfig& cfg);

}  // namespace docsim
