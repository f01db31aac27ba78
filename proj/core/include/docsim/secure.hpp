#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "docsim/cyber.hpp"
#include "docsim/graph.hpp"
#include "docsim/monitor.hpp"

namespace docsim {

/// Secure countermeasure settings of one node.
struct SecurityConfig {
  Eigen::VectorXd y_s;   ///< secure setpoint
  bool enabled = true;   ///< Case 2 runs with the countermeasure disabled
};

/// How a quarantined neighbor is removed from the consensus sums:
/// `prune` drops the edge from every sum (Theorem-4 proof semantics,
/// default); `zero` keeps the edge but reads the flagged node's (y, v)
/// as zero (the algorithm-text reading, kept for comparison).
enum class QuarantineMode : std::uint8_t { prune, zero };

/// Notification signal: 1 iff the node's alarm has latched by time t.
int notify(const MonitorState& ms, double t);

/// Command switching: the command passes through until the flag is raised,
/// then becomes the constant (y_s, 0, 0).
Command secure_command(const Command& cmd, int flag, const SecurityConfig& cfg);

/// Per-node neighbor views of one synchronous round under the given flags.
/// In prune mode a flagged neighbor disappears from the effective set; in
/// zero mode the sets are unchanged (the caller zeroes received values).
/// Flagged nodes get an empty view (their command no longer reads the
/// network).
struct RoundView {
  std::vector<std::vector<int>> effective_neighbors;
};

RoundView secure_round(const Graph& g, const std::vector<std::uint8_t>& flags,
                       QuarantineMode mode);

/// Assumption-4 probe: is the subgraph induced by unflagged nodes still
/// connected? (False triggers a warning, not an abort.)
bool healthy_subgraph_connected(const Graph& g,
                                const std::vector<std::uint8_t>& flags);

}  // namespace docsim
