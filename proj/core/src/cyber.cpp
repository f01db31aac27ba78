#include "docsim/cyber.hpp"

namespace docsim {

namespace {

// Sum over the node's (possibly restricted) neighbor set.
template <typename F>
Eigen::VectorXd neighbor_sum(int j, const Graph& g,
                             const std::vector<int>* effective, int m, F&& term) {
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(m);
  const std::vector<int>& nbrs = effective ? *effective : g.neighbors(j);
  for (int i : nbrs) {
    acc += g.weight(j, i) * term(i);
  }
  return acc;
}

}  // namespace

Eigen::VectorXd v_tilde(int j, const std::vector<Eigen::VectorXd>& v_all,
                        const Graph& g, const std::vector<int>* effective) {
  const int m = static_cast<int>(v_all[j].size());
  return neighbor_sum(j, g, effective, m, [&](int i) -> Eigen::VectorXd {
    return v_all[j] - v_all[i];
  });
}

OptimizerDeriv optimizer_deriv(int j, const AgentState& a,
                               const std::vector<Eigen::VectorXd>& y_recv,
                               const std::vector<Eigen::VectorXd>& v_recv,
                               const Objective& obj, double eta, const Graph& g,
                               const std::vector<int>* effective) {
  const int m = static_cast<int>(a.y_r.size());
  const Eigen::VectorXd vt = v_tilde(j, v_recv, g, effective);
  const Eigen::VectorXd disagreement =
      neighbor_sum(j, g, effective, m, [&](int i) -> Eigen::VectorXd {
        return y_recv[j] - y_recv[i];
      });
  OptimizerDeriv d;
  d.y_r_dot = -obj.gradient(a.y_r) - vt - (1.0 + eta) * disagreement;
  d.v_dot = disagreement;
  return d;
}

Command make_command(const AgentState& a, const Objective& obj,
                     const Eigen::VectorXd& vt) {
  return Command{a.y_r, obj.gradient(a.y_r), vt};
}

OptimalityResidual optimality_residual(const std::vector<Eigen::VectorXd>& y,
                                       const std::vector<Objective>& objs,
                                       const Graph& g) {
  const int n = g.size();
  const int m = static_cast<int>(y[0].size());
  Eigen::VectorXd stacked(n * m);
  for (int j = 0; j < n; ++j) stacked.segment(j * m, m) = y[j];

  const Eigen::MatrixXd big_l = laplacian(g).expanded(m);

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(m);
  for (int j = 0; j < n; ++j) mean += y[j];
  mean /= static_cast<double>(n);

  Eigen::VectorXd grad_sum = Eigen::VectorXd::Zero(m);
  for (int j = 0; j < n; ++j) grad_sum += objs[j].gradient(mean);

  OptimalityResidual r;
  r.consensus_err = (big_l * stacked).norm();
  r.stationarity_err = grad_sum.norm();
  return r;
}

}  // namespace docsim
