#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "docsim/rov.hpp"
#include "docsim/scenario.hpp"
#include "docsim/sim.hpp"

using namespace docsim;

namespace {

bool mentions(const std::vector<std::string>& problems, const std::string& needle) {
  for (const std::string& p : problems) {
    if (p.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("scenario: preset JSON round trip is lossless") {
  for (int which : {1, 2, 3}) {
    const ScenarioConfig cfg = preset_case(which);
    const std::string text = scenario_to_json(cfg);
    const ScenarioConfig back = parse_scenario(text);
    CHECK(scenario_to_json(back) == text);
  }
}

TEST_CASE("scenario: checked-in files match the presets") {
  const std::string root = DOCSIM_SOURCE_DIR;
  for (int which : {1, 2, 3}) {
    const std::string path =
        root + "/scenarios/rov_case" + std::to_string(which) + ".json";
    const ScenarioConfig from_file = load_scenario(path);
    CHECK(scenario_to_json(from_file) == scenario_to_json(preset_case(which)));
  }
}

TEST_CASE("scenario: validation rejects the documented invariants") {
  // eta bound of Theorem 1
  ScenarioConfig cfg = preset_case(1);
  cfg.eta = 1.0;
  CHECK(mentions(validate_scenario(cfg), "eta"));

  // threshold pole c = eta_j: ring w_Nj = 2, eta_j = (1 + eta) * 2
  cfg = preset_case(1);
  cfg.nodes[0].funnel.c = (1.0 + cfg.eta) * 2.0;
  CHECK(mentions(validate_scenario(cfg), "eta_j"));

  cfg = preset_case(1);
  cfg.nodes[1].funnel.c = 2.0;  // = w_Nj
  CHECK(mentions(validate_scenario(cfg), "w_Nj"));

  // funnel must admit the initial error
  cfg = preset_case(1);
  cfg.nodes[2].y_r0 = Eigen::VectorXd::Constant(4, 5.0);
  cfg.nodes[2].funnel.k0 = 0.5;
  CHECK(mentions(validate_scenario(cfg), "funnel"));

  // disconnected graph
  cfg = preset_case(1);
  cfg.graph.edges.pop_back();
  cfg.graph.edges.pop_back();
  CHECK(mentions(validate_scenario(cfg), "connected"));

  // bad dt
  cfg = preset_case(1);
  cfg.dt = 0.0;
  CHECK(mentions(validate_scenario(cfg), "dt"));

  // presets themselves are valid
  CHECK(validate_scenario(preset_case(1)).empty());
  CHECK(validate_scenario(preset_case(2)).empty());
  CHECK(validate_scenario(preset_case(3)).empty());
}

TEST_CASE("scenario: unknown kinds are rejected at parse time") {
  CHECK_THROWS_AS(parse_scenario(R"({"graph":{"n":2,"edges":[[0,1,1.0]]},
    "nodes":[{"plant":"integrator","x0":[0,0],
              "objective":{"center":[0]},
              "attack":{"kind":"mystery"}},
             {"plant":"integrator","x0":[0,0],
              "objective":{"center":[0]}}]})"),
                  std::invalid_argument);
}

TEST_CASE("trace: CSV round trip reproduces the in-memory trace exactly") {
  ScenarioConfig cfg;
  cfg.name = "roundtrip";
  cfg.graph.n = 2;
  cfg.graph.edges = {{0, 1, 1.0}};
  cfg.dt = 0.002;
  cfg.horizon = 0.5;
  cfg.eta = 2.5;
  for (int j = 0; j < 2; ++j) {
    NodeConfig nc;
    nc.plant = "bounded_trig";
    nc.m = 2;
    nc.theta = Eigen::VectorXd(2);
    nc.theta << 0.4, 0.2;
    nc.x0 = Eigen::VectorXd::Zero(4);
    nc.x0(0) = 0.1 * (j + 1);
    nc.objective_center = Eigen::VectorXd::Constant(2, 0.1 * j);
    nc.funnel.k0 = 1.0;
    nc.y_s = Eigen::VectorXd::Zero(2);
    cfg.nodes.push_back(nc);
  }

  const RunResult rr = run(cfg);
  const std::string path = std::string(DOCSIM_SOURCE_DIR) + "/build/tmp_trace.csv";
  write_trace_csv(rr.trace, path);
  const Trace back = read_trace_csv(path);
  CHECK(traces_equal(rr.trace, back));
  std::remove(path.c_str());
}
