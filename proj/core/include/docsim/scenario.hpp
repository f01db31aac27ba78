#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "docsim/control.hpp"
#include "docsim/graph.hpp"
#include "docsim/monitor.hpp"
#include "docsim/plant.hpp"
#include "docsim/secure.hpp"

namespace docsim {

struct GraphConfig {
  int n = 0;
  std::vector<Edge> edges;
};

struct FunnelConfig {
  std::optional<double> k0;  ///< absent: sized from the initial error
  double kb = 0.3;
  double c = 0.3;
};

struct AttackConfig {
  AttackKind kind = AttackKind::none;
  double onset = 30.0;
  double amplitude = 1.0;
  double rate = 0.3;
};

struct NodeConfig {
  std::string plant = "integrator";  ///< integrator | bounded_trig | rov
  int n = 2;                         ///< chain order (integrator only; others fix it)
  int m = 1;
  Eigen::VectorXd theta;             ///< generic plants only
  Eigen::VectorXd x0;                ///< full chain state (n*m)
  Eigen::VectorXd objective_center;  ///< builtin quadratic objective
  std::vector<double> c_gains{10.0, 10.0};
  double gamma_scale = 1.0;          ///< Gamma = gamma_scale * I
  double gamma0 = 1.0;
  double gamma1 = 1.0;
  FunnelConfig funnel;
  double omega_bar = 50.0;
  AttackConfig attack;
  std::optional<Eigen::VectorXd> y_r0;  ///< default: x0 head (own output)
  Eigen::VectorXd y_s;                  ///< secure setpoint (default zero)
};

struct ScenarioConfig {
  std::string name = "scenario";
  GraphConfig graph;
  double dt = 0.002;
  double horizon = 80.0;
  double eta = 2.5;
  ArrMode arr = ArrMode::either;
  QuarantineMode quarantine = QuarantineMode::prune;
  bool security_enabled = true;
  int record_stride = 1;
  std::vector<NodeConfig> nodes;
};

/// JSON serialization of the scenario grammar (see README for the schema).
ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(const std::string& json_text);
std::string scenario_to_json(const ScenarioConfig& cfg);
void save_scenario(const ScenarioConfig& cfg, const std::string& path);

/// Returns every violated load-time invariant (empty means valid):
/// graph validity and connectivity, eta > 2(n-1), dt/horizon positivity,
/// gain positivity, threshold poles c != eta_j and c != w_Nj, funnel
/// admitting the initial tracking error, nonsingular input map at x0.
std::vector<std::string> validate_scenario(const ScenarioConfig& cfg);

/// Config-to-runtime factories shared by validation and the simulator.
PlantParams make_plant(const NodeConfig& nc);
Objective make_objective(const NodeConfig& nc);
/// Builds the funnel; an absent k0 is sized as max(2 sqrt(m) max|z1_s(0)|, 1).
Funnel make_funnel(const NodeConfig& nc, const Eigen::VectorXd& z1_0);

}  // namespace docsim
