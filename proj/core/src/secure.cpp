#include "docsim/secure.hpp"

namespace docsim {

int notify(const MonitorState& ms, double t) {
  return (ms.t_detect && t >= *ms.t_detect) ? 1 : 0;
}

Command secure_command(const Command& cmd, int flag, const SecurityConfig& cfg) {
  if (flag == 0) return cmd;
  const auto m = cfg.y_s.size();
  return Command{cfg.y_s, Eigen::VectorXd::Zero(m), Eigen::VectorXd::Zero(m)};
}

RoundView secure_round(const Graph& g, const std::vector<std::uint8_t>& flags,
                       QuarantineMode mode) {
  RoundView view;
  view.effective_neighbors.resize(g.size());
  for (int j = 0; j < g.size(); ++j) {
    if (flags[j]) continue;  // quarantined: command fixed, no network reads
    for (int i : g.neighbors(j)) {
      if (mode == QuarantineMode::prune && flags[i]) continue;
      view.effective_neighbors[j].push_back(i);
    }
  }
  return view;
}

bool healthy_subgraph_connected(const Graph& g,
                                const std::vector<std::uint8_t>& flags) {
  std::vector<int> flagged;
  for (int j = 0; j < g.size(); ++j) {
    if (flags[j]) flagged.push_back(j);
  }
  if (flagged.size() == static_cast<std::size_t>(g.size())) return false;
  return g.prune(flagged).connected();
}

}  // namespace docsim
