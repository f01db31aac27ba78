#include "docsim/sim.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "docsim/errors.hpp"

namespace docsim {

Eigen::VectorXd rk4_step(
    const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& f,
    double t, const Eigen::VectorXd& s, double dt) {
  const Eigen::VectorXd k1 = f(t, s);
  const Eigen::VectorXd k2 = f(t + 0.5 * dt, s + 0.5 * dt * k1);
  const Eigen::VectorXd k3 = f(t + 0.5 * dt, s + 0.5 * dt * k2);
  const Eigen::VectorXd k4 = f(t + dt, s + dt * k3);
  return s + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

World::World(const ScenarioConfig& cfg) : cfg_(cfg) {
  const std::vector<std::string> problems = validate_scenario(cfg);
  if (!problems.empty()) {
    std::string all = "invalid scenario:";
    for (const std::string& p : problems) all += "\n  - " + p;
    throw std::invalid_argument(all);
  }

  graph_ = Graph::build(cfg.graph.n, cfg.graph.edges);
  const int n_nodes = graph_.size();
  m_ = cfg.nodes[0].m;
  for (const NodeConfig& nc : cfg.nodes) {
    if (nc.m != m_) {
      throw std::invalid_argument("all nodes must share the signal dimension m");
    }
  }

  int offset = 0;
  for (int j = 0; j < n_nodes; ++j) {
    const NodeConfig& nc = cfg.nodes[j];
    NodeRuntime rt;
    rt.plant = make_plant(nc);
    rt.objective = make_objective(nc);
    rt.gains.c = nc.c_gains;
    rt.gains.Gamma =
        nc.gamma_scale * Eigen::MatrixXd::Identity(rt.plant.p + 1, rt.plant.p + 1);
    rt.gains.gamma0 = nc.gamma0;
    rt.gains.gamma1 = nc.gamma1;

    const Eigen::VectorXd y_r0 = nc.y_r0 ? *nc.y_r0 : nc.x0.head(m_);
    rt.funnel = make_funnel(nc, nc.x0.head(m_) - y_r0);

    rt.thresholds.omega_bar = nc.omega_bar;
    rt.thresholds.c1 = rt.gains.c[0];
    rt.thresholds.w_nj = graph_.neighbor_weight_sum(j);
    rt.thresholds.eta_j = (1.0 + cfg.eta) * rt.thresholds.w_nj;
    rt.thresholds.k0 = rt.funnel.k0;
    rt.thresholds.kb = rt.funnel.kb;
    rt.thresholds.c = rt.funnel.c;
    rt.thresholds.e_r0 = 0.0;  // filter starts at the optimizer state
    rt.thresholds.e_v0 = 0.0;
    rt.thresholds.validate();

    rt.attack.kind = nc.attack.kind;
    rt.attack.onset = nc.attack.onset;
    rt.attack.amplitude = nc.attack.amplitude;
    rt.attack.rate = nc.attack.rate;

    rt.security.y_s = nc.y_s;
    rt.security.enabled = cfg.security_enabled;

    Layout lay;
    lay.x = offset;
    lay.y_r = lay.x + rt.plant.n * m_;
    lay.v = lay.y_r + m_;
    lay.y_hat = lay.v + m_;
    lay.v_hat = lay.y_hat + m_;
    lay.lam = lay.v_hat + m_;
    lay.rho = lay.lam + rt.plant.p + 1;
    lay.pi = lay.rho + 1;
    offset = lay.pi + m_;

    layout_.push_back(lay);
    nodes_.push_back(std::move(rt));
  }
  dim_ = offset;

  state_ = Eigen::VectorXd::Zero(dim_);
  for (int j = 0; j < n_nodes; ++j) {
    const NodeConfig& nc = cfg.nodes[j];
    const Eigen::VectorXd y_r0 = nc.y_r0 ? *nc.y_r0 : nc.x0.head(m_);
    state_.segment(layout_[j].x, nodes_[j].plant.n * m_) = nc.x0;
    state_.segment(layout_[j].y_r, m_) = y_r0;
    state_.segment(layout_[j].y_hat, m_) = y_r0;  // e_r(0) = 0
  }

  alarmed_.assign(n_nodes, 0);
  flags_.assign(n_nodes, 0);
  t_detect_.assign(n_nodes, std::nullopt);
  round_view_ = secure_round(graph_, flags_, cfg_.quarantine);
  max_state_norm_ = state_.cwiseAbs().maxCoeff();
}

Eigen::VectorBlock<Eigen::VectorXd> World::x(int j) {
  return state_.segment(layout_[j].x, nodes_[j].plant.n * m_);
}
Eigen::VectorBlock<Eigen::VectorXd> World::y_r(int j) {
  return state_.segment(layout_[j].y_r, m_);
}
Eigen::VectorBlock<Eigen::VectorXd> World::v(int j) {
  return state_.segment(layout_[j].v, m_);
}
Eigen::VectorBlock<Eigen::VectorXd> World::y_r_hat(int j) {
  return state_.segment(layout_[j].y_hat, m_);
}
Eigen::VectorBlock<Eigen::VectorXd> World::v_hat(int j) {
  return state_.segment(layout_[j].v_hat, m_);
}
Eigen::VectorBlock<Eigen::VectorXd> World::lambda_hat(int j) {
  return state_.segment(layout_[j].lam, nodes_[j].plant.p + 1);
}
double& World::rho_hat(int j) { return state_(layout_[j].rho); }
Eigen::VectorBlock<Eigen::VectorXd> World::pi_hat(int j) {
  return state_.segment(layout_[j].pi, m_);
}

RoundEval World::eval_round(double t, const Eigen::VectorXd& s) const {
  const int n = n_nodes();
  RoundEval ev;
  ev.y.resize(n);
  ev.vt.resize(n);
  ev.cmd.resize(n);
  ev.u_i.resize(n);
  ev.u_o.resize(n);
  ev.z1.resize(n);
  ev.tau_n.resize(n);

  // Snapshot views for the worst-case adversary.
  std::vector<Eigen::VectorXd> xs(n), yrs(n), vs(n), yhats(n), vhats(n);
  for (int j = 0; j < n; ++j) {
    xs[j] = s.segment(layout_[j].x, nodes_[j].plant.n * m_);
    yrs[j] = s.segment(layout_[j].y_r, m_);
    vs[j] = s.segment(layout_[j].v, m_);
    yhats[j] = s.segment(layout_[j].y_hat, m_);
    vhats[j] = s.segment(layout_[j].v_hat, m_);
  }
  AttackContext ctx;
  ctx.t = t;
  ctx.x = &xs;
  ctx.y_r = &yrs;
  ctx.v = &vs;
  ctx.y_r_hat = &yhats;
  ctx.v_hat = &vhats;

  for (int j = 0; j < n; ++j) {
    ev.y[j] = sensor_output(xs[j], nodes_[j].plant, nodes_[j].attack, ctx, t);
  }

  // Received values: the zero quarantine mode reads flagged nodes as zero,
  // the prune mode drops their edges instead (already in the round view).
  std::vector<Eigen::VectorXd> y_recv = ev.y;
  std::vector<Eigen::VectorXd> v_recv = vs;
  if (cfg_.quarantine == QuarantineMode::zero) {
    for (int j = 0; j < n; ++j) {
      if (flags_[j]) {
        y_recv[j].setZero();
        v_recv[j].setZero();
      }
    }
  }

  for (int j = 0; j < n; ++j) {
    const NodeRuntime& rt = nodes_[j];
    if (flags_[j]) {
      ev.vt[j] = Eigen::VectorXd::Zero(m_);
      ev.cmd[j] = Command{rt.security.y_s, Eigen::VectorXd::Zero(m_),
                          Eigen::VectorXd::Zero(m_)};
    } else {
      ev.vt[j] = v_tilde(j, v_recv, graph_, &round_view_.effective_neighbors[j]);
      AgentState a{yrs[j], vs[j]};
      ev.cmd[j] = make_command(a, rt.objective, ev.vt[j]);
    }

    const OuterControl oc =
        outer_control(ev.cmd[j], rt.objective.hessian(ev.cmd[j].y_r), rt.plant, xs[j]);
    const InnerControl ic = inner_control(xs[j], AdaptiveState{
                                              s.segment(layout_[j].lam, rt.plant.p + 1),
                                              s(layout_[j].rho),
                                              s.segment(layout_[j].pi, m_)},
                                          ev.cmd[j], rt.gains, rt.funnel, rt.plant, t,
                                          oc.alpha_O, j);
    ev.u_o[j] = oc.u_O;
    ev.u_i[j] = ic.u_I;
    ev.z1[j] = ic.z[0];
    ev.tau_n[j] = ic.tau_n;
  }
  return ev;
}

Eigen::VectorXd World::deriv(double t, const Eigen::VectorXd& s) const {
  const int n = n_nodes();
  const RoundEval ev = eval_round(t, s);

  std::vector<Eigen::VectorXd> v_recv(n), y_recv = ev.y;
  for (int j = 0; j < n; ++j) v_recv[j] = s.segment(layout_[j].v, m_);
  if (cfg_.quarantine == QuarantineMode::zero) {
    for (int j = 0; j < n; ++j) {
      if (flags_[j]) {
        y_recv[j].setZero();
        v_recv[j].setZero();
      }
    }
  }

  Eigen::VectorXd ds = Eigen::VectorXd::Zero(dim_);
  for (int j = 0; j < n; ++j) {
    const NodeRuntime& rt = nodes_[j];
    const Layout& lay = layout_[j];
    const Eigen::VectorXd xj = s.segment(lay.x, rt.plant.n * m_);

    // Physical layer (the plant itself is never quarantined).
    ds.segment(lay.x, rt.plant.n * m_) =
        plant_deriv(xj, total_control(ev.u_i[j], ev.u_o[j]), rt.plant);

    // Cyber layer: a flagged node stops integrating its optimizer and
    // filter (its command is pinned to the secure setpoint).
    if (!flags_[j]) {
      AgentState a{s.segment(lay.y_r, m_), s.segment(lay.v, m_)};
      const OptimizerDeriv od =
          optimizer_deriv(j, a, y_recv, v_recv, rt.objective, cfg_.eta, graph_,
                          &round_view_.effective_neighbors[j]);
      ds.segment(lay.y_r, m_) = od.y_r_dot;
      ds.segment(lay.v, m_) = od.v_dot;

      MonitorState ms{s.segment(lay.y_hat, m_), s.segment(lay.v_hat, m_), false,
                      std::nullopt};
      const FilterDeriv fd =
          filter_deriv(ms, j, y_recv, a.v, ev.vt[j], rt.objective, cfg_.eta, graph_,
                       &round_view_.effective_neighbors[j]);
      ds.segment(lay.y_hat, m_) = fd.y_r_hat_dot;
      ds.segment(lay.v_hat, m_) = fd.v_hat_dot;
    }

    // Adaptive estimates keep integrating (the quarantined inner loop still
    // tracks the secure setpoint).
    const AdaptiveDeriv ad = adaptive_deriv(
        AdaptiveState{s.segment(lay.lam, rt.plant.p + 1), s(lay.rho),
                      s.segment(lay.pi, m_)},
        ev.tau_n[j], ev.z1[j], rt.gains);
    ds.segment(lay.lam, rt.plant.p + 1) = ad.lambda_hat_dot;
    ds(lay.rho) = ad.rho_hat_dot;
    ds.segment(lay.pi, m_) = ad.pi_hat_dot;
  }
  return ds;
}

void World::quarantine(int j) {
  flags_[j] = 1;
  round_view_ = secure_round(graph_, flags_, cfg_.quarantine);
  assumption4_ok_ = healthy_subgraph_connected(graph_, flags_);

  // The command jumps to y_s, so the funnel is re-anchored around the new
  // tracking error.
  const Eigen::VectorXd z1 = state_.segment(layout_[j].x, m_) - nodes_[j].security.y_s;
  Funnel& f = nodes_[j].funnel;
  f.t0 = t_;
  const double needed = 2.0 * std::sqrt(static_cast<double>(m_)) *
                        (z1.size() > 0 ? z1.cwiseAbs().maxCoeff() : 0.0);
  f.k0 = std::max(f.k0, needed);
}

void World::discrete_update() {
  for (int j = 0; j < n_nodes(); ++j) {
    if (alarmed_[j]) continue;
    const Eigen::VectorXd e_r =
        state_.segment(layout_[j].y_r, m_) - state_.segment(layout_[j].y_hat, m_);
    const Eigen::VectorXd e_v =
        state_.segment(layout_[j].v, m_) - state_.segment(layout_[j].v_hat, m_);
    const ArrResult arr =
        arr_check(e_r.norm(), threshold_r(nodes_[j].thresholds, t_), e_v.norm(),
                  threshold_v(nodes_[j].thresholds, t_), cfg_.arr);
    if (arr.alarm) {
      alarmed_[j] = 1;
      t_detect_[j] = t_;
      if (cfg_.security_enabled && !flags_[j]) quarantine(j);
    }
  }
}

void World::step() {
  state_ = rk4_step([this](double t, const Eigen::VectorXd& s) { return deriv(t, s); },
                    t_, state_, cfg_.dt);
  ++step_count_;
  t_ = cfg_.dt * static_cast<double>(step_count_);  // exact grid, no drift
  if (!state_.allFinite()) {
    throw DivergenceError(t_);
  }
  max_state_norm_ = std::max(max_state_norm_, state_.cwiseAbs().maxCoeff());
  if (!t_norm_exceeded_ && max_state_norm_ > 1e3) t_norm_exceeded_ = t_;
}

void World::append_record(Trace& trace) const {
  if (trace.nodes.empty()) trace.nodes.resize(n_nodes());
  const RoundEval ev = eval_round(t_, state_);
  trace.t.push_back(t_);
  for (int j = 0; j < n_nodes(); ++j) {
    NodeTrace& nt = trace.nodes[j];
    const Layout& lay = layout_[j];
    nt.x.push_back(state_.segment(lay.x, nodes_[j].plant.n * m_));
    nt.y.push_back(ev.y[j]);
    nt.y_r.push_back(state_.segment(lay.y_r, m_));
    nt.v.push_back(state_.segment(lay.v, m_));
    nt.lambda_hat.push_back(state_.segment(lay.lam, nodes_[j].plant.p + 1));
    nt.rho_hat.push_back(state_(lay.rho));
    nt.pi_hat.push_back(state_.segment(lay.pi, m_));
    nt.u_i.push_back(ev.u_i[j]);
    nt.u_o.push_back(ev.u_o[j]);
    nt.e_r.push_back(state_.segment(lay.y_r, m_) - state_.segment(lay.y_hat, m_));
    nt.e_v.push_back(state_.segment(lay.v, m_) - state_.segment(lay.v_hat, m_));
    nt.thr_r.push_back(threshold_r(nodes_[j].thresholds, t_));
    nt.thr_v.push_back(threshold_v(nodes_[j].thresholds, t_));
    nt.alarm.push_back(alarmed_[j]);
    nt.flag.push_back(flags_[j]);
  }
}

RunResult run(const ScenarioConfig& cfg) {
  const auto wall_start = std::chrono::steady_clock::now();

  World world(cfg);
  RunResult out;
  out.trace.dt = cfg.dt * cfg.record_stride;

  const auto total_steps = static_cast<long>(std::llround(cfg.horizon / cfg.dt));
  out.trace.end_reason = EndReason::completed;

  long k = 0;
  try {
    for (; k < total_steps; ++k) {
      world.discrete_update();
      if (k % cfg.record_stride == 0) world.append_record(out.trace);
      world.step();
    }
    world.discrete_update();
    if (total_steps % cfg.record_stride == 0) world.append_record(out.trace);
    out.trace.end_time = world.t();
  } catch (const FunnelViolation& e) {
    out.trace.end_reason = EndReason::funnel_violation;
    out.trace.end_time = e.t;
    out.trace.end_detail = e.what();
  } catch (const DivergenceError& e) {
    out.trace.end_reason = EndReason::divergence;
    out.trace.end_time = world.t();
    out.trace.end_detail = e.what();
  }

  RunReport& rep = out.report;
  rep.completed = out.trace.end_reason == EndReason::completed;
  rep.end_reason = out.trace.end_reason;
  rep.end_time = out.trace.end_time;
  rep.end_detail = out.trace.end_detail;
  rep.max_signal_norm = world.max_state_norm();
  rep.t_norm_exceeded = world.t_norm_exceeded();
  rep.diverged = !rep.completed || rep.max_signal_norm > 1e3;
  rep.flags = world.flags();
  rep.t_detect = world.detection_times();
  rep.healthy_subgraph_connected = world.assumption4_ok();

  std::vector<Eigen::VectorXd> healthy_y;
  std::vector<Objective> healthy_obj;
  std::vector<int> flagged;
  for (int j = 0; j < world.n_nodes(); ++j) {
    rep.final_output.push_back(world.x(j).head(world.nodes()[j].plant.m));
    if (world.flags()[j]) {
      flagged.push_back(j);
    } else {
      healthy_y.push_back(rep.final_output.back());
      healthy_obj.push_back(world.nodes()[j].objective);
    }
  }
  if (!healthy_y.empty() && healthy_y.size() > 1) {
    const Graph sub = world.graph().prune(flagged);
    const OptimalityResidual res = optimality_residual(healthy_y, healthy_obj, sub);
    rep.consensus_err = res.consensus_err;
    rep.stationarity_err = res.stationarity_err;
  }

  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start)
          .count();
  return out;
}

}  // namespace docsim
