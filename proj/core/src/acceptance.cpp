#include "docsim/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "docsim/rov.hpp"
#include "docsim/sim.hpp"

namespace docsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

Eigen::Vector4d case1_optimum() {
  return {0.15, 0.25, 0.625, -7.0 * kPi / 96.0};
}

Eigen::Vector4d case3_healthy_optimum() {
  // Centroid of the first three initial poses.
  return {0.4 / 3.0, 0.5 / 3.0, 0.5, -7.0 * kPi / 72.0};
}

// Tracking error z1 = x1 - y_r reconstructed from a trace record.
Eigen::VectorXd trace_z1(const NodeTrace& nt, std::size_t k, int m) {
  return nt.x[k].head(m) - nt.y_r[k];
}

// ---------------------------------------------------------------------------
// Criterion 2 support: random connected scenarios around the generic plant.

ScenarioConfig random_generic_scenario(std::mt19937& rng) {
  std::uniform_int_distribution<int> n_dist(3, 6);
  std::uniform_int_distribution<int> m_dist(1, 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> center_dist(-1.0, 1.0);
  std::uniform_real_distribution<double> x0_dist(-0.5, 0.5);
  std::uniform_real_distribution<double> theta_mag(0.3, 1.0);

  ScenarioConfig cfg;
  cfg.name = "generic_random";
  cfg.dt = 0.005;
  cfg.horizon = 60.0;
  cfg.eta = 2.5;  // 2(n-1) + 0.5 for n = 2
  cfg.record_stride = 200;
  cfg.security_enabled = true;

  const int n_nodes = n_dist(rng);
  const int m = m_dist(rng);
  cfg.graph.n = n_nodes;
  std::uniform_real_distribution<double> w_dist(1.0, 2.0);
  for (int v = 1; v < n_nodes; ++v) {
    std::uniform_int_distribution<int> parent(0, v - 1);
    cfg.graph.edges.push_back({parent(rng), v, w_dist(rng)});
  }
  for (int i = 0; i < n_nodes; ++i) {
    for (int j = i + 1; j < n_nodes; ++j) {
      const bool present =
          std::any_of(cfg.graph.edges.begin(), cfg.graph.edges.end(),
                      [&](const Edge& e) {
                        return (e.i == i && e.j == j) || (e.i == j && e.j == i);
                      });
      if (!present && unit(rng) < 0.65) cfg.graph.edges.push_back({i, j, w_dist(rng)});
    }
  }

  for (int j = 0; j < n_nodes; ++j) {
    NodeConfig nc;
    nc.plant = "bounded_trig";
    nc.m = m;
    nc.theta = Eigen::VectorXd(2);
    nc.theta << (unit(rng) < 0.5 ? -1.0 : 1.0) * theta_mag(rng),
        (unit(rng) < 0.5 ? -1.0 : 1.0) * theta_mag(rng);
    nc.x0 = Eigen::VectorXd::Zero(2 * m);
    for (int s = 0; s < m; ++s) nc.x0(s) = x0_dist(rng);
    nc.objective_center = Eigen::VectorXd(m);
    for (int s = 0; s < m; ++s) nc.objective_center(s) = center_dist(rng);
    nc.y_s = Eigen::VectorXd::Zero(m);
    cfg.nodes.push_back(std::move(nc));
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Criterion 7 support: admissible tracking-error envelopes and quadratures.

// Simpson integral of a * e^{a(tau-t)} * h(tau) over [0, t].
double psi_exact(double a, const std::function<double(double)>& h, double t,
                 int intervals = 4000) {
  if (intervals % 2) ++intervals;
  const double dt = t / intervals;
  double acc = 0.0;
  for (int k = 0; k <= intervals; ++k) {
    const double tau = k * dt;
    const double w = (k == 0 || k == intervals) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    acc += w * std::exp(a * (tau - t)) * h(tau);
  }
  return a * acc * dt / 3.0;
}

}  // namespace

bool all_passed(const std::vector<CriterionResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CriterionResult& r) { return r.passed; });
}

std::vector<CriterionResult> run_acceptance(std::ostream& out) {
  std::vector<CriterionResult> results;
  const auto report = [&](int id, const std::string& name, bool ok,
                          const std::string& detail) {
    results.push_back({id, name, ok, detail});
    out << (ok ? "[PASS] " : "[FAIL] ") << id << ". " << name;
    if (!detail.empty()) out << "  (" << detail << ")";
    out << "\n" << std::flush;
  };

  // -------------------------------------------------------------- criterion 1
  ScenarioConfig case1 = preset_case(1);
  case1.record_stride = 1;
  RunResult r1 = run(case1);
  {
    const Eigen::Vector4d target = case1_optimum();
    double worst = 0.0;
    bool found_t30 = false;
    for (std::size_t k = 0; k < r1.trace.size(); ++k) {
      if (r1.trace.t[k] < 30.0) continue;
      found_t30 = true;
      for (const NodeTrace& nt : r1.trace.nodes) {
        worst = std::max(worst, (nt.x[k].head(4) - target).cwiseAbs().maxCoeff());
      }
    }
    const bool ok = r1.report.completed && found_t30 && worst < 0.02 &&
                    r1.report.max_signal_norm < 1e3 &&
                    r1.report.wall_seconds < 60.0;
    report(1, "healthy optimality (Theorem 1 / Case 1)", ok,
           "max |y - y*| on [30,80] = " + fmt(worst) +
               ", max norm = " + fmt(r1.report.max_signal_norm) +
               ", wall = " + fmt(r1.report.wall_seconds) + " s");
  }

  // -------------------------------------------------------------- criterion 2
  {
    std::mt19937 rng(20240817);
    bool ok = true;
    double worst_consensus = 0.0;
    double worst_centroid = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const ScenarioConfig cfg = random_generic_scenario(rng);
      const RunResult rr = run(cfg);
      if (!rr.report.completed) {
        ok = false;
        worst_consensus = std::numeric_limits<double>::infinity();
        break;
      }
      Eigen::VectorXd centroid = Eigen::VectorXd::Zero(cfg.nodes[0].m);
      for (const NodeConfig& nc : cfg.nodes) centroid += nc.objective_center;
      centroid /= static_cast<double>(cfg.nodes.size());

      std::vector<Objective> objs;
      for (const NodeConfig& nc : cfg.nodes) objs.push_back(make_objective(nc));
      const Graph g = Graph::build(cfg.graph.n, cfg.graph.edges);
      const OptimalityResidual res =
          optimality_residual(rr.report.final_output, objs, g);
      worst_consensus = std::max(worst_consensus, res.consensus_err);
      for (const Eigen::VectorXd& y : rr.report.final_output) {
        worst_centroid = std::max(worst_centroid, (y - centroid).norm());
      }
    }
    ok = ok && worst_consensus < 1e-2 && worst_centroid < 1e-2;
    report(2, "generic Theorem-1 property suite (20 randomized scenarios)", ok,
           "max ||L y|| = " + fmt(worst_consensus) +
               ", max centroid distance = " + fmt(worst_centroid));
  }

  // ---------------------------------------------------------- criteria 3 & 4
  ScenarioConfig case3 = preset_case(3);
  case3.record_stride = 1;
  RunResult r3 = run(case3);
  {
    const auto& td = r3.report.t_detect;
    const bool node4_detected = td[3].has_value() && *td[3] >= 30.0 && *td[3] <= 33.0;
    const bool others_silent = !td[0] && !td[1] && !td[2];
    const bool ok = r3.report.completed && node4_detected && others_silent;
    report(3, "detection & isolation (Theorem 2 / Case 3)", ok,
           std::string("node-4 T_d = ") + (td[3] ? fmt(*td[3]) + " s" : "none") +
               ", healthy alarms: " +
               (others_silent ? "none" : "FIRED"));
  }
  {
    const Eigen::Vector4d healthy_target = case3_healthy_optimum();
    double worst_healthy = 0.0;
    for (int j = 0; j < 3; ++j) {
      worst_healthy = std::max(
          worst_healthy,
          (r3.report.final_output[j] - healthy_target).cwiseAbs().maxCoeff());
    }
    const double worst_secure = r3.report.final_output[3].cwiseAbs().maxCoeff();
    const bool ok = r3.report.completed && worst_healthy < 0.02 && worst_secure < 0.02;
    report(4, "secure consensus (Theorem 4 / Case 3)", ok,
           "healthy |y - y*| = " + fmt(worst_healthy) +
               ", attacked |y - y_s| = " + fmt(worst_secure));
  }

  // -------------------------------------------------------------- criterion 5
  {
    ScenarioConfig case2 = preset_case(2);
    const RunResult r2 = run(case2);
    double fail_time = r2.report.end_time;
    bool failed_in_time = false;
    if (!r2.report.completed && r2.report.end_time < 45.0) failed_in_time = true;
    if (r2.report.t_norm_exceeded && *r2.report.t_norm_exceeded < 45.0) {
      failed_in_time = true;
      fail_time = std::min(fail_time, *r2.report.t_norm_exceeded);
    }
    const bool ok = r2.report.diverged && failed_in_time;
    report(5, "unprotected failure (Case 2)", ok,
           std::string("run ") +
               (r2.report.completed ? "completed" : "aborted") + " at t=" +
               fmt(fail_time) + " s, reason: " +
               (r2.report.end_reason == EndReason::funnel_violation
                    ? "funnel escape"
                    : r2.report.end_reason == EndReason::divergence
                          ? "non-finite state"
                          : "norm > 1e3"));
  }

  // -------------------------------------------------------------- criterion 6
  {
    ScenarioConfig stealth = preset_case(3);
    stealth.name = "rov_stealth";
    stealth.record_stride = 10;
    stealth.nodes[3].attack.kind = AttackKind::l2_decaying;
    stealth.nodes[3].attack.onset = 30.0;
    stealth.nodes[3].attack.amplitude = 0.05;
    stealth.nodes[3].attack.rate = 0.3;
    const RunResult rs = run(stealth);
    bool any_alarm = false;
    for (const auto& td : rs.report.t_detect) any_alarm |= td.has_value();
    const Eigen::Vector4d target = case1_optimum();
    double worst = 0.0;
    for (const Eigen::VectorXd& y : rs.report.final_output) {
      worst = std::max(worst, (y - target).cwiseAbs().maxCoeff());
    }
    const bool ok = rs.report.completed && !any_alarm && worst < 0.05;
    report(6, "undetectable-attack robustness (Theorem 3 / Lemma 6)", ok,
           std::string("alarms: ") + (any_alarm ? "FIRED" : "none") +
               ", max |y - y*| = " + fmt(worst));
  }

  // -------------------------------------------------------------- criterion 7
  {
    bool residuals_ok = true;
    double worst_gap_r = -1e9, worst_gap_v = -1e9;
    const int m = 4;
    for (int j = 0; j < 4 && residuals_ok; ++j) {
      const NodeTrace& nt = r1.trace.nodes[j];
      const ThresholdParams tp = [&] {
        World w(case1);
        return w.nodes()[j].thresholds;
      }();
      SampledNorms z1n{0.0, r1.trace.dt, {}};
      SampledNorms ezn{0.0, r1.trace.dt, {}};
      for (std::size_t k = 0; k < r1.trace.size(); ++k) {
        const Eigen::VectorXd z1 = trace_z1(nt, k, m);
        z1n.values.push_back(z1.norm());
        ezn.values.push_back((nt.e_r[k] + z1).norm());
      }
      for (std::size_t k = 1; k < r1.trace.size(); k += 50) {
        const double t = r1.trace.t[k];
        const double bound_r = psi(tp.eta_j, z1n, 0.0, t);
        const double bound_v = psi(tp.w_nj, ezn, 0.0, t);
        const double gap_r = nt.e_r[k].norm() - bound_r;
        const double gap_v = nt.e_v[k].norm() - bound_v;
        worst_gap_r = std::max(worst_gap_r, gap_r);
        worst_gap_v = std::max(worst_gap_v, gap_v);
        if (gap_r > 1e-4 || gap_v > 1e-4) residuals_ok = false;
      }
    }

    // Lemma-4 closed forms dominate sampled admissible Psi evaluations.
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const ThresholdParams tp = [&] {
      World w(case1);
      return w.nodes()[0].thresholds;
    }();
    double worst_margin = 1e9;
    const std::vector<double> sample_times{0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 40.0, 80.0};
    for (int trial = 0; trial < 1000; ++trial) {
      const double a0 = unit(rng);
      const double a1 = unit(rng) * (1.0 - a0);
      const double w1 = 0.2 + 5.0 * unit(rng);
      const double ph = 2.0 * kPi * unit(rng);
      const auto u = [=](double tau) {
        return std::clamp(a0 + a1 * std::sin(w1 * tau + ph), 0.0, 1.0);
      };
      const bool ez_set = trial % 2 == 1;
      const double a = ez_set ? tp.w_nj : tp.eta_j;
      const auto h = [&](double tau) {
        const double envelope = tp.k0 * std::exp(-tp.c * tau) + tp.kb;
        if (!ez_set) return u(tau) * envelope;
        const double e_env =
            std::exp(-a * tau) * tp.e_r0 + psi_bar_z(tp, a, 0.0, tau);
        return u(tau) * (e_env + envelope);
      };
      const double t = sample_times[trial % sample_times.size()];
      const double psi_val = psi_exact(a, h, t);
      const double closed =
          ez_set ? threshold_v(tp, t) - std::exp(-tp.w_nj * t) * tp.e_v0
                 : psi_bar_z(tp, tp.eta_j, 0.0, t);
      worst_margin = std::min(worst_margin, closed - psi_val);
    }

    const bool ok = residuals_ok && worst_margin >= -1e-9;
    report(7, "threshold soundness (Lemmas 2-4)", ok,
           "max residual-bound gap r/v = " + fmt(worst_gap_r) + "/" +
               fmt(worst_gap_v) + ", min dominance margin = " + fmt(worst_margin));
  }

  // -------------------------------------------------------------- criterion 8
  {
    bool ok = true;
    double worst_ratio = 0.0;
    World w(case1);
    for (std::size_t k = 0; k < r1.trace.size(); ++k) {
      for (int j = 0; j < 4; ++j) {
        const NodeTrace& nt = r1.trace.nodes[j];
        const double delta = funnel_value(w.nodes()[j].funnel, 4, r1.trace.t[k]);
        const double ratio = trace_z1(nt, k, 4).norm() / (2.0 * delta);
        worst_ratio = std::max(worst_ratio, ratio);
        if (ratio >= 1.0) ok = false;
      }
    }
    report(8, "funnel containment (Lemma 3)", ok,
           "max ||z1|| / (sqrt(m) delta) = " + fmt(worst_ratio));
  }

  // -------------------------------------------------------------- criterion 9
  {
    std::ostringstream detail;
    bool ok = true;

    // Gradient / Hessian finite-difference checks.
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    double worst_grad = 0.0, worst_hess = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const int m = 1 + trial % 4;
      Eigen::VectorXd center(m), at(m);
      for (int s = 0; s < m; ++s) {
        center(s) = dist(rng);
        at(s) = dist(rng);
      }
      const Objective obj = quadratic_objective(center);
      const double h = 1e-6;
      const Eigen::VectorXd grad = obj.gradient(at);
      const Eigen::MatrixXd hess = obj.hessian(at);
      for (int s = 0; s < m; ++s) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
        e(s) = h;
        const double fd_grad = (obj.value(at + e) - obj.value(at - e)) / (2.0 * h);
        worst_grad = std::max(
            worst_grad, std::abs(fd_grad - grad(s)) / (1.0 + std::abs(grad(s))));
        const Eigen::VectorXd fd_hess_col =
            (obj.gradient(at + e) - obj.gradient(at - e)) / (2.0 * h);
        worst_hess = std::max(worst_hess,
                              (fd_hess_col - hess.col(s)).norm() /
                                  (1.0 + hess.col(s).norm()));
      }
    }
    if (worst_grad >= 1e-6 || worst_hess >= 1e-5) ok = false;
    detail << "fd grad/hess = " << fmt(worst_grad) << "/" << fmt(worst_hess);

    // 4-ring spectrum.
    const Graph ring = Graph::build(
        4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 0, 1.0}});
    const Eigen::VectorXd eig = laplacian(ring).eigenvalues();
    const Eigen::Vector4d expected(0.0, 2.0, 2.0, 4.0);
    const double spec_err = (eig - expected).cwiseAbs().maxCoeff();
    if (spec_err >= 1e-9) ok = false;
    detail << ", ring spectrum err = " << fmt(spec_err);

    // 4th-order convergence on a Case-1 transient window.
    {
      ScenarioConfig base = preset_case(1);
      base.horizon = 20.0;
      const auto positions_at = [&](double dt, int stride) {
        ScenarioConfig cfg = base;
        cfg.dt = dt;
        cfg.record_stride = stride;
        return run(cfg).trace;
      };
      const Trace ref = positions_at(0.00025, 80);   // 0.02 s grid
      const Trace mid = positions_at(0.001, 20);     // 0.02 s grid
      const Trace coarse = positions_at(0.002, 10);  // 0.02 s grid
      double err_mid = 0.0, err_coarse = 0.0;
      const std::size_t count = std::min({ref.size(), mid.size(), coarse.size()});
      for (std::size_t k = 0; k < count; ++k) {
        for (int j = 0; j < 4; ++j) {
          err_mid = std::max(err_mid, (mid.nodes[j].x[k].head(4) -
                                       ref.nodes[j].x[k].head(4))
                                          .cwiseAbs()
                                          .maxCoeff());
          err_coarse = std::max(err_coarse, (coarse.nodes[j].x[k].head(4) -
                                             ref.nodes[j].x[k].head(4))
                                                .cwiseAbs()
                                                .maxCoeff());
        }
      }
      const double order = std::log2(err_coarse / err_mid);
      if (!(order > 3.4 && order < 4.6)) ok = false;
      detail << ", empirical order = " << fmt(order);
    }

    // Bit-exact determinism.
    const RunResult r1_again = run(case1);
    const bool deterministic = traces_equal(r1.trace, r1_again.trace);
    if (!deterministic) ok = false;
    detail << ", determinism = " << (deterministic ? "bit-exact" : "MISMATCH");

    report(9, "numerics (derivative checks, spectrum, order, determinism)", ok,
           detail.str());
  }

  return results;
}

}  // namespace docsim
