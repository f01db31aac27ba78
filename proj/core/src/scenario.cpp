#include "docsim/scenario.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "docsim/control.hpp"
#include "docsim/rov.hpp"

namespace docsim {

using nlohmann::json;

namespace {

json vec_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Eigen::VectorXd vec_from_json(const json& arr) {
  Eigen::VectorXd v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
  return v;
}

std::string arr_mode_name(ArrMode m) {
  switch (m) {
    case ArrMode::either: return "either";
    case ArrMode::both_violated: return "both_violated";
    case ArrMode::r_only: return "r_only";
    default: return "v_only";
  }
}

ArrMode arr_mode_from(const std::string& s) {
  if (s == "either") return ArrMode::either;
  if (s == "both_violated") return ArrMode::both_violated;
  if (s == "r_only") return ArrMode::r_only;
  if (s == "v_only") return ArrMode::v_only;
  throw std::invalid_argument("scenario: unknown arr mode '" + s + "'");
}

std::string attack_kind_name(AttackKind k) {
  switch (k) {
    case AttackKind::none: return "none";
    case AttackKind::paper_exponential: return "paper_exponential";
    case AttackKind::l2_decaying: return "l2_decaying";
    default: return "custom";
  }
}

AttackKind attack_kind_from(const std::string& s) {
  if (s == "none") return AttackKind::none;
  if (s == "paper_exponential") return AttackKind::paper_exponential;
  if (s == "l2_decaying") return AttackKind::l2_decaying;
  throw std::invalid_argument("scenario: unknown attack kind '" + s + "'");
}

}  // namespace

std::string scenario_to_json(const ScenarioConfig& cfg) {
  json root;
  root["name"] = cfg.name;
  root["dt"] = cfg.dt;
  root["horizon"] = cfg.horizon;
  root["eta"] = cfg.eta;
  root["arr"] = arr_mode_name(cfg.arr);
  root["quarantine"] = cfg.quarantine == QuarantineMode::prune ? "prune" : "zero";
  root["security_enabled"] = cfg.security_enabled;
  root["record_stride"] = cfg.record_stride;

  root["graph"]["n"] = cfg.graph.n;
  json edges = json::array();
  for (const Edge& e : cfg.graph.edges) edges.push_back({e.i, e.j, e.weight});
  root["graph"]["edges"] = edges;

  json nodes = json::array();
  for (const NodeConfig& nc : cfg.nodes) {
    json n;
    n["plant"] = nc.plant;
    n["n"] = nc.n;
    n["m"] = nc.m;
    if (nc.theta.size() > 0) n["theta"] = vec_to_json(nc.theta);
    n["x0"] = vec_to_json(nc.x0);
    n["objective"] = {{"type", "quadratic"}, {"center", vec_to_json(nc.objective_center)}};
    n["gains"] = {{"c", nc.c_gains},
                  {"gamma_scale", nc.gamma_scale},
                  {"gamma0", nc.gamma0},
                  {"gamma1", nc.gamma1}};
    json funnel;
    if (nc.funnel.k0) funnel["k0"] = *nc.funnel.k0;
    funnel["kb"] = nc.funnel.kb;
    funnel["c"] = nc.funnel.c;
    n["funnel"] = funnel;
    n["omega_bar"] = nc.omega_bar;
    n["attack"] = {{"kind", attack_kind_name(nc.attack.kind)},
                   {"onset", nc.attack.onset},
                   {"amplitude", nc.attack.amplitude},
                   {"rate", nc.attack.rate}};
    if (nc.y_r0) n["y_r0"] = vec_to_json(*nc.y_r0);
    n["y_s"] = vec_to_json(nc.y_s);
    nodes.push_back(std::move(n));
  }
  root["nodes"] = nodes;
  return root.dump(2) + "\n";
}

ScenarioConfig parse_scenario(const std::string& json_text) {
  json root = json::parse(json_text);
  ScenarioConfig cfg;
  cfg.name = root.value("name", std::string("scenario"));
  cfg.dt = root.value("dt", 0.002);
  cfg.horizon = root.value("horizon", 80.0);
  cfg.eta = root.value("eta", 2.5);
  cfg.arr = arr_mode_from(root.value("arr", std::string("either")));
  const std::string q = root.value("quarantine", std::string("prune"));
  if (q != "prune" && q != "zero") {
    throw std::invalid_argument("scenario: unknown quarantine mode '" + q + "'");
  }
  cfg.quarantine = q == "prune" ? QuarantineMode::prune : QuarantineMode::zero;
  cfg.security_enabled = root.value("security_enabled", true);
  cfg.record_stride = root.value("record_stride", 1);

  const json& graph = root.at("graph");
  cfg.graph.n = graph.at("n").get<int>();
  for (const json& e : graph.at("edges")) {
    cfg.graph.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
  }

  for (const json& n : root.at("nodes")) {
    NodeConfig nc;
    nc.plant = n.value("plant", std::string("integrator"));
    nc.n = n.value("n", 2);
    nc.m = n.value("m", 1);
    if (n.contains("theta")) nc.theta = vec_from_json(n["theta"]);
    nc.x0 = vec_from_json(n.at("x0"));
    nc.objective_center = vec_from_json(n.at("objective").at("center"));
    if (n.contains("gains")) {
      const json& g = n["gains"];
      if (g.contains("c")) nc.c_gains = g["c"].get<std::vector<double>>();
      nc.gamma_scale = g.value("gamma_scale", 1.0);
      nc.gamma0 = g.value("gamma0", 1.0);
      nc.gamma1 = g.value("gamma1", 1.0);
    }
    if (n.contains("funnel")) {
      const json& f = n["funnel"];
      if (f.contains("k0")) nc.funnel.k0 = f["k0"].get<double>();
      nc.funnel.kb = f.value("kb", 0.3);
      nc.funnel.c = f.value("c", 0.3);
    }
    nc.omega_bar = n.value("omega_bar", 50.0);
    if (n.contains("attack")) {
      const json& a = n["attack"];
      nc.attack.kind = attack_kind_from(a.value("kind", std::string("none")));
      nc.attack.onset = a.value("onset", 30.0);
      nc.attack.amplitude = a.value("amplitude", 1.0);
      nc.attack.rate = a.value("rate", 0.3);
    }
    if (n.contains("y_r0")) nc.y_r0 = vec_from_json(n["y_r0"]);
    if (n.contains("y_s")) {
      nc.y_s = vec_from_json(n["y_s"]);
    } else {
      nc.y_s = Eigen::VectorXd::Zero(nc.m);
    }
    cfg.nodes.push_back(std::move(nc));
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("scenario: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

void save_scenario(const ScenarioConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("scenario: cannot write '" + path + "'");
  out << scenario_to_json(cfg);
}

std::vector<std::string> validate_scenario(const ScenarioConfig& cfg) {
  std::vector<std::string> bad;
  const auto fail = [&](const std::string& s) { bad.push_back(s); };

  if (cfg.dt <= 0.0) fail("dt must be positive");
  if (cfg.horizon <= 0.0) fail("horizon must be positive");
  if (cfg.record_stride < 1) fail("record_stride must be >= 1");
  if (cfg.graph.n < 2) fail("graph must have at least 2 nodes (monitors need a neighbor)");
  if (static_cast<int>(cfg.nodes.size()) != cfg.graph.n) {
    fail("node list size must match graph order");
    return bad;
  }

  Graph g;
  try {
    g = Graph::build(cfg.graph.n, cfg.graph.edges);
  } catch (const std::exception& e) {
    fail(e.what());
    return bad;
  }
  if (!g.connected()) fail("graph must be connected (Assumption 2)");
  for (int j = 0; j < g.size(); ++j) {
    if (g.neighbors(j).empty()) {
      fail("node " + std::to_string(j) + " is isolated");
    }
  }

  for (int j = 0; j < static_cast<int>(cfg.nodes.size()); ++j) {
    const NodeConfig& nc = cfg.nodes[j];
    const std::string tag = "node " + std::to_string(j) + ": ";

    PlantParams plant;
    try {
      plant = make_plant(nc);
    } catch (const std::exception& e) {
      fail(tag + e.what());
      continue;
    }

    if (cfg.eta <= 2.0 * (plant.n - 1)) {
      fail(tag + "eta = " + std::to_string(cfg.eta) +
           " violates Theorem 1's bound eta > 2(n-1) = " +
           std::to_string(2.0 * (plant.n - 1)));
    }
    if (nc.x0.size() != plant.n * plant.m) fail(tag + "x0 must have n*m entries");
    if (nc.objective_center.size() != plant.m) fail(tag + "objective center must have m entries");
    if (nc.y_s.size() != plant.m) fail(tag + "y_s must have m entries");
    if (static_cast<int>(nc.c_gains.size()) != plant.n) {
      fail(tag + "gains.c must have n entries");
    }
    for (double c : nc.c_gains) {
      if (!(c > 0.0)) fail(tag + "gains.c entries must be positive");
    }
    if (!(nc.gamma_scale > 0.0) || !(nc.gamma0 > 0.0) || !(nc.gamma1 > 0.0)) {
      fail(tag + "adaptation gains must be positive");
    }
    if (!(nc.funnel.kb > 0.0) || !(nc.funnel.c > 0.0)) {
      fail(tag + "funnel constants must be positive");
    }
    if (nc.funnel.k0 && !(*nc.funnel.k0 > 0.0)) fail(tag + "funnel k0 must be positive");

    if (nc.x0.size() != plant.n * plant.m || nc.objective_center.size() != plant.m) {
      continue;  // size errors already reported; the checks below need shapes
    }

    // Threshold closed forms have poles at c = eta_j and c = w_Nj.
    const double w_nj = g.neighbor_weight_sum(j);
    const double eta_j = (1.0 + cfg.eta) * w_nj;
    if (nc.funnel.c == eta_j) fail(tag + "funnel c equals eta_j = (1+eta) w_Nj");
    if (nc.funnel.c == w_nj) fail(tag + "funnel c equals w_Nj");

    // The funnel must admit the initial tracking error componentwise.
    const Eigen::VectorXd y_r0 = nc.y_r0 ? *nc.y_r0 : nc.x0.head(plant.m);
    if (y_r0.size() != plant.m) {
      fail(tag + "y_r0 must have m entries");
      continue;
    }
    const Eigen::VectorXd z1 = nc.x0.head(plant.m) - y_r0;
    Funnel f = make_funnel(nc, z1);
    const double delta0 = funnel_value(f, plant.m, 0.0);
    for (int s = 0; s < plant.m; ++s) {
      if (std::abs(z1(s)) >= delta0) {
        fail(tag + "initial tracking error component " + std::to_string(s) +
             " violates the funnel: |" + std::to_string(z1(s)) +
             "| >= delta(0) = " + std::to_string(delta0));
      }
    }

    Eigen::FullPivLU<Eigen::MatrixXd> lu(plant.input_map(nc.x0));
    if (!lu.isInvertible()) fail(tag + "input map is singular at x0");
  }
  return bad;
}

PlantParams make_plant(const NodeConfig& nc) {
  if (nc.plant == "rov") {
    if (nc.m != 4) throw std::invalid_argument("rov plant requires m = 4");
    return embed_strict_feedback(RovParams{});
  }
  if (nc.plant == "bounded_trig") {
    if (nc.theta.size() != 2) {
      throw std::invalid_argument("bounded_trig plant requires a 2-entry theta");
    }
    return bounded_trig_plant(nc.m, nc.theta);
  }
  if (nc.plant == "integrator") {
    if (nc.n < 2) throw std::invalid_argument("integrator plant requires n >= 2");
    return integrator_chain(nc.n, nc.m);
  }
  throw std::invalid_argument("unknown plant kind '" + nc.plant + "'");
}

Objective make_objective(const NodeConfig& nc) {
  return quadratic_objective(nc.objective_center);
}

Funnel make_funnel(const NodeConfig& nc, const Eigen::VectorXd& z1_0) {
  Funnel f;
  f.kb = nc.funnel.kb;
  f.c = nc.funnel.c;
  if (nc.funnel.k0) {
    f.k0 = *nc.funnel.k0;
  } else {
    // Sized from the initial error, with a floor that leaves room for the
    // consensus transient (whose rate term is not fed forward).
    const double m = static_cast<double>(z1_0.size());
    const double peak = z1_0.size() > 0 ? z1_0.cwiseAbs().maxCoeff() : 0.0;
    f.k0 = std::max(2.0 * peak * std::sqrt(m), 3.0);
  }
  return f;
}

}  // namespace docsim
