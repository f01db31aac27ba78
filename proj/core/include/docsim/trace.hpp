#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace docsim {

/// Per-node time series; every vector has one entry per recorded instant.
struct NodeTrace {
  std::vector<Eigen::VectorXd> x, y, y_r, v, lambda_hat, pi_hat, u_i, u_o, e_r, e_v;
  std::vector<double> rho_hat, thr_r, thr_v;
  std::vector<std::uint8_t> alarm, flag;
};

enum class EndReason : std::uint8_t { completed, funnel_violation, divergence };

/// Rectangular record of a run on a uniform grid (step = record_stride * dt).
struct Trace {
  double dt = 0.0;  ///< recording grid step
  std::vector<double> t;
  std::vector<NodeTrace> nodes;

  EndReason end_reason = EndReason::completed;
  double end_time = 0.0;
  std::string end_detail;

  std::size_t size() const { return t.size(); }
};

/// Long-format CSV: header `t,node,signal,component,value`, preceded by
/// `#`-prefixed metadata lines. Doubles are printed with 17 significant
/// digits so a re-parse reproduces the trace exactly.
void write_trace_csv(const Trace& trace, std::ostream& out);
void write_trace_csv(const Trace& trace, const std::string& path);
Trace read_trace_csv(const std::string& path);

bool traces_equal(const Trace& a, const Trace& b);

/// End-of-run summary consistent with the trace tail.
struct RunReport {
  bool completed = false;
  EndReason end_reason = EndReason::completed;
  double end_time = 0.0;
  std::string end_detail;
  double max_signal_norm = 0.0;
  std::optional<double> t_norm_exceeded;  ///< first instant any |state| > 1e3
  bool diverged = false;  ///< non-finite state, norm > 1e3, or funnel escape

  std::vector<Eigen::VectorXd> final_output;  ///< y per node at the end
  std::vector<std::uint8_t> flags;
  std::vector<std::optional<double>> t_detect;

  /// Optimality residuals of the unflagged subset at the end.
  double consensus_err = 0.0;
  double stationarity_err = 0.0;
  bool healthy_subgraph_connected = true;

  double wall_seconds = 0.0;

  std::string summary() const;
};

}  // namespace docsim
