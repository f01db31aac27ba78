#include "docsim/trace.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace docsim {

namespace {

const char* end_reason_name(EndReason r) {
  switch (r) {
    case EndReason::completed: return "completed";
    case EndReason::funnel_violation: return "funnel_violation";
    default: return "divergence";
  }
}

EndReason end_reason_from(const std::string& s) {
  if (s == "completed") return EndReason::completed;
  if (s == "funnel_violation") return EndReason::funnel_violation;
  if (s == "divergence") return EndReason::divergence;
  throw std::invalid_argument("trace: unknown end reason '" + s + "'");
}

void print_value(std::ostream& out, double v) {
  std::array<char, 32> buf;
  const int len = std::snprintf(buf.data(), buf.size(), "%.17g", v);
  out.write(buf.data(), len);
}

struct SignalRef {
  const char* name;
  std::vector<Eigen::VectorXd> NodeTrace::* vec_member;
  std::vector<double> NodeTrace::* scalar_member;
  std::vector<std::uint8_t> NodeTrace::* flag_member;
};

constexpr std::array<SignalRef, 15> kSignals = {{
    {"x", &NodeTrace::x, nullptr, nullptr},
    {"y", &NodeTrace::y, nullptr, nullptr},
    {"y_r", &NodeTrace::y_r, nullptr, nullptr},
    {"v", &NodeTrace::v, nullptr, nullptr},
    {"lambda_hat", &NodeTrace::lambda_hat, nullptr, nullptr},
    {"rho_hat", nullptr, &NodeTrace::rho_hat, nullptr},
    {"pi_hat", &NodeTrace::pi_hat, nullptr, nullptr},
    {"u_I", &NodeTrace::u_i, nullptr, nullptr},
    {"u_O", &NodeTrace::u_o, nullptr, nullptr},
    {"e_r", &NodeTrace::e_r, nullptr, nullptr},
    {"e_v", &NodeTrace::e_v, nullptr, nullptr},
    {"thr_r", nullptr, &NodeTrace::thr_r, nullptr},
    {"thr_v", nullptr, &NodeTrace::thr_v, nullptr},
    {"alarm", nullptr, nullptr, &NodeTrace::alarm},
    {"flag", nullptr, nullptr, &NodeTrace::flag},
}};

}  // namespace

void write_trace_csv(const Trace& trace, std::ostream& out) {
  out << "# docsim trace v1\n";
  out << "# dt=";
  print_value(out, trace.dt);
  out << "\n# nodes=" << trace.nodes.size() << "\n";
  out << "# end_reason=" << end_reason_name(trace.end_reason) << "\n";
  out << "# end_time=";
  print_value(out, trace.end_time);
  out << "\n# end_detail=" << trace.end_detail << "\n";
  out << "t,node,signal,component,value\n";

  for (std::size_t k = 0; k < trace.t.size(); ++k) {
    for (std::size_t j = 0; j < trace.nodes.size(); ++j) {
      const NodeTrace& nt = trace.nodes[j];
      for (const SignalRef& sig : kSignals) {
        if (sig.vec_member) {
          const Eigen::VectorXd& vec = (nt.*sig.vec_member)[k];
          for (Eigen::Index c = 0; c < vec.size(); ++c) {
            print_value(out, trace.t[k]);
            out << ',' << j << ',' << sig.name << ',' << c << ',';
            print_value(out, vec(c));
            out << '\n';
          }
        } else if (sig.scalar_member) {
          print_value(out, trace.t[k]);
          out << ',' << j << ',' << sig.name << ",0,";
          print_value(out, (nt.*sig.scalar_member)[k]);
          out << '\n';
        } else {
          print_value(out, trace.t[k]);
          out << ',' << j << ',' << sig.name << ",0,"
              << static_cast<int>((nt.*sig.flag_member)[k]) << '\n';
        }
      }
    }
  }
}

void write_trace_csv(const Trace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("trace: cannot write '" + path + "'");
  write_trace_csv(trace, out);
}

Trace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("trace: cannot open '" + path + "'");

  Trace trace;
  std::string line;
  std::size_t n_nodes = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(2, eq - 2);
      const std::string val = line.substr(eq + 1);
      if (key == "dt") trace.dt = std::stod(val);
      else if (key == "nodes") n_nodes = std::stoul(val);
      else if (key == "end_reason") trace.end_reason = end_reason_from(val);
      else if (key == "end_time") trace.end_time = std::stod(val);
      else if (key == "end_detail") trace.end_detail = val;
      continue;
    }
    if (line.rfind("t,node,", 0) == 0) break;  // header row
  }
  trace.nodes.resize(n_nodes);

  // Collect rows; rebuild vectors per (time, node, signal).
  struct Cell {
    std::map<int, double> components;
  };
  // row storage: per time index, per node, per signal name
  std::vector<std::map<std::string, Cell>> empty_row(n_nodes);
  std::vector<std::vector<std::map<std::string, Cell>>> rows;
  double last_t = 0.0;
  bool have_t = false;

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string t_s, node_s, sig, comp_s, val_s;
    std::getline(ls, t_s, ',');
    std::getline(ls, node_s, ',');
    std::getline(ls, sig, ',');
    std::getline(ls, comp_s, ',');
    std::getline(ls, val_s, ',');
    const double t = std::stod(t_s);
    if (!have_t || t != last_t) {
      trace.t.push_back(t);
      rows.push_back(empty_row);
      last_t = t;
      have_t = true;
    }
    const int node = std::stoi(node_s);
    rows.back()[node][sig].components[std::stoi(comp_s)] = std::stod(val_s);
  }

  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (std::size_t j = 0; j < n_nodes; ++j) {
      NodeTrace& nt = trace.nodes[j];
      for (const SignalRef& sig : kSignals) {
        const auto it = rows[k][j].find(sig.name);
        if (it == rows[k][j].end()) {
          throw std::invalid_argument("trace: missing signal '" +
                                      std::string(sig.name) + "' in CSV");
        }
        const auto& comps = it->second.components;
        if (sig.vec_member) {
          Eigen::VectorXd vec(comps.size());
          for (const auto& [c, val] : comps) vec(c) = val;
          (nt.*sig.vec_member).push_back(std::move(vec));
        } else if (sig.scalar_member) {
          (nt.*sig.scalar_member).push_back(comps.at(0));
        } else {
          (nt.*sig.flag_member).push_back(static_cast<std::uint8_t>(comps.at(0) != 0.0));
        }
      }
    }
  }
  return trace;
}

namespace {

bool vecs_equal(const std::vector<Eigen::VectorXd>& a,
                const std::vector<Eigen::VectorXd>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) return false;
    for (Eigen::Index c = 0; c < a[i].size(); ++c) {
      if (a[i](c) != b[i](c)) return false;
    }
  }
  return true;
}

}  // namespace

bool traces_equal(const Trace& a, const Trace& b) {
  if (a.t != b.t || a.dt != b.dt || a.nodes.size() != b.nodes.size() ||
      a.end_reason != b.end_reason || a.end_time != b.end_time) {
    return false;
  }
  for (std::size_t j = 0; j < a.nodes.size(); ++j) {
    const NodeTrace& x = a.nodes[j];
    const NodeTrace& y = b.nodes[j];
    if (!vecs_equal(x.x, y.x) || !vecs_equal(x.y, y.y) || !vecs_equal(x.y_r, y.y_r) ||
        !vecs_equal(x.v, y.v) || !vecs_equal(x.lambda_hat, y.lambda_hat) ||
        !vecs_equal(x.pi_hat, y.pi_hat) || !vecs_equal(x.u_i, y.u_i) ||
        !vecs_equal(x.u_o, y.u_o) || !vecs_equal(x.e_r, y.e_r) ||
        !vecs_equal(x.e_v, y.e_v) || x.rho_hat != y.rho_hat ||
        x.thr_r != y.thr_r || x.thr_v != y.thr_v || x.alarm != y.alarm ||
        x.flag != y.flag) {
      return false;
    }
  }
  return true;
}

std::string RunReport::summary() const {
  std::ostringstream os;
  os << "status        : " << (completed ? "completed" : "aborted") << " ("
     << end_reason_name(end_reason) << ") at t=" << end_time << " s\n";
  if (!end_detail.empty()) os << "detail        : " << end_detail << "\n";
  os << "diverged      : " << (diverged ? "yes" : "no") << "\n";
  os << "max |signal|  : " << max_signal_norm << "\n";
  os << "consensus err : " << consensus_err << "  (unflagged subset)\n";
  os << "stationarity  : " << stationarity_err << "\n";
  if (!healthy_subgraph_connected) {
    os << "WARNING       : pruned healthy subgraph is disconnected (Assumption 4)\n";
  }
  for (std::size_t j = 0; j < final_output.size(); ++j) {
    os << "node " << j << " final y: [";
    for (Eigen::Index c = 0; c < final_output[j].size(); ++c) {
      if (c) os << ", ";
      os << final_output[j](c);
    }
    os << "]";
    if (flags[j]) os << "  FLAGGED";
    if (t_detect[j]) os << "  T_d=" << *t_detect[j] << " s";
    os << "\n";
  }
  os << "wall clock    : " << wall_seconds << " s\n";
  return os.str();
}

}  // namespace docsim
