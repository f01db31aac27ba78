#pragma once

#include <Eigen/Dense>
#include <vector>

#include "docsim/graph.hpp"
#include "docsim/objective.hpp"

namespace docsim {

/// Optimizer state pair of one decision-making agent.
struct AgentState {
  Eigen::VectorXd y_r;  ///< solution estimate
  Eigen::VectorXd v;    ///< dual-like state
};

/// Control command sent to the physical layer.
struct Command {
  Eigen::VectorXd y_r;
  Eigen::VectorXd grad;
  Eigen::VectorXd v_tilde;
};

/// Weighted dual disagreement sum_{i in N_j} w_ji (v_j - v_i). When
/// `effective` is given the sum is restricted to those neighbors (quarantine
/// pruning); it must be a subset of N_j.
Eigen::VectorXd v_tilde(int j, const std::vector<Eigen::VectorXd>& v_all,
                        const Graph& g,
                        const std::vector<int>* effective = nullptr);

struct OptimizerDeriv {
  Eigen::VectorXd y_r_dot;
  Eigen::VectorXd v_dot;
};

/// Saddle-point consensus dynamics driven by received measurements:
///   y_r' = -grad g(y_r) - vtilde - (1+eta) sum w_ji (y_j - y_i)
///   v'   =                          sum w_ji (y_j - y_i)
/// `y_recv` holds the (possibly attacked) measurements of every node;
/// only entry j and the (effective) neighbors are read.
OptimizerDeriv optimizer_deriv(int j, const AgentState& a,
                               const std::vector<Eigen::VectorXd>& y_recv,
                               const std::vector<Eigen::VectorXd>& v_recv,
                               const Objective& obj, double eta, const Graph& g,
                               const std::vector<int>* effective = nullptr);

/// Command packaging Im = (y_r, grad g(y_r), vtilde).
Command make_command(const AgentState& a, const Objective& obj,
                     const Eigen::VectorXd& vt);

struct OptimalityResidual {
  double consensus_err = 0.0;    ///< ||(L (x) I_m) y||
  double stationarity_err = 0.0; ///< ||sum_j grad g_j(mean)||
};

/// Both residuals vanish exactly at the consensual minimizer of the team
/// objective.
OptimalityResidual optimality_residual(const std::vector<Eigen::VectorXd>& y,
                                       const std::vector<Objective>& objs,
                                       const Graph& g);

}  // namespace docsim
