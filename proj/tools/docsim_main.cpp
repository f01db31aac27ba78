// Command-line front end: scenario ingestion, execution, CSV/plot
// emission and the acceptance-report mode.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "docsim/acceptance.hpp"
#include "docsim/rov.hpp"
#include "docsim/scenario.hpp"
#include "docsim/sim.hpp"
#include "svg_plot.hpp"

namespace {

using namespace docsim;

struct ScenarioSelection {
  std::string path;
  int case_id = 0;
};

ScenarioConfig resolve_scenario(const ScenarioSelection& sel) {
  if (!sel.path.empty() && sel.case_id != 0) {
    throw CLI::ValidationError("give either --scenario or --case, not both");
  }
  if (!sel.path.empty()) return load_scenario(sel.path);
  if (sel.case_id != 0) return preset_case(sel.case_id);
  throw CLI::ValidationError("one of --scenario or --case is required");
}

void write_plots(const Trace& trace, const std::filesystem::path& dir) {
  const int n = static_cast<int>(trace.nodes.size());

  std::vector<plot::Series> positions;
  const int m = static_cast<int>(trace.nodes[0].y_r[0].size());
  static const char* comp_names[] = {"x", "y", "z", "psi"};
  for (int j = 0; j < n; ++j) {
    for (int c = 0; c < m; ++c) {
      plot::Series s;
      s.label = "node " + std::to_string(j + 1) + " " +
                (m <= 4 ? comp_names[c] : std::to_string(c));
      s.color = plot::color(j * m + c);
      for (std::size_t k = 0; k < trace.size(); ++k) {
        s.x.push_back(trace.t[k]);
        s.y.push_back(trace.nodes[j].x[k](c));
      }
      positions.push_back(std::move(s));
    }
  }
  plot::write_svg_lines((dir / "positions.svg").string(), "outputs y(t)", "t (s)",
                        "position", positions);

  std::vector<plot::Series> residuals;
  for (int j = 0; j < n; ++j) {
    plot::Series e, thr;
    e.label = "||e_r|| node " + std::to_string(j + 1);
    e.color = plot::color(j);
    thr.label = "threshold node " + std::to_string(j + 1);
    thr.color = plot::color(j + n);
    for (std::size_t k = 0; k < trace.size(); ++k) {
      e.x.push_back(trace.t[k]);
      e.y.push_back(trace.nodes[j].e_r[k].norm());
      thr.x.push_back(trace.t[k]);
      thr.y.push_back(trace.nodes[j].thr_r[k]);
    }
    residuals.push_back(std::move(e));
    residuals.push_back(std::move(thr));
  }
  plot::write_svg_lines((dir / "residuals.svg").string(),
                        "residuals vs adaptive thresholds", "t (s)", "||e_r||",
                        residuals);

  std::vector<plot::Series> controls;
  for (int j = 0; j < n; ++j) {
    for (int c = 0; c < m; ++c) {
      plot::Series s;
      s.label = "node " + std::to_string(j + 1) + " u" + std::to_string(c);
      s.color = plot::color(j * m + c);
      for (std::size_t k = 0; k < trace.size(); ++k) {
        s.x.push_back(trace.t[k]);
        s.y.push_back(trace.nodes[j].u_i[k](c) + trace.nodes[j].u_o[k](c));
      }
      controls.push_back(std::move(s));
    }
  }
  plot::write_svg_lines((dir / "controls.svg").string(), "control inputs", "t (s)",
                        "u", controls);
}

int cmd_run(const ScenarioSelection& sel, double dt_override, int stride_override,
            const std::string& out_dir, bool no_plots) {
  ScenarioConfig cfg = resolve_scenario(sel);
  if (dt_override > 0.0) cfg.dt = dt_override;
  if (stride_override > 0) cfg.record_stride = stride_override;

  const auto problems = validate_scenario(cfg);
  if (!problems.empty()) {
    std::cerr << "invalid scenario:\n";
    for (const auto& p : problems) std::cerr << "  - " << p << "\n";
    return 2;
  }

  const RunResult result = run(cfg);

  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  write_trace_csv(result.trace, (dir / "trace.csv").string());
  {
    std::ofstream rep(dir / "report.txt");
    rep << "scenario      : " << cfg.name << "\n" << result.report.summary();
  }
  if (!no_plots) write_plots(result.trace, dir);

  std::cout << "scenario      : " << cfg.name << "\n"
            << result.report.summary() << "outputs in    : " << out_dir << "\n";
  if (!result.report.healthy_subgraph_connected) {
    std::cerr << "warning: pruned healthy subgraph is disconnected; the "
                 "surviving nodes cannot reach consensus\n";
  }
  return result.report.diverged ? 1 : 0;
}

int cmd_check(const ScenarioSelection& sel) {
  ScenarioConfig cfg = resolve_scenario(sel);
  const auto problems = validate_scenario(cfg);
  if (problems.empty()) {
    std::cout << "scenario '" << cfg.name << "' is valid: " << cfg.graph.n
              << " nodes, dt=" << cfg.dt << " s, horizon=" << cfg.horizon
              << " s, eta=" << cfg.eta << "\n";
    return 0;
  }
  std::cerr << "scenario '" << cfg.name << "' is invalid:\n";
  for (const auto& p : problems) std::cerr << "  - " << p << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"docsim - secure distributed optimal coordination simulator"};
  app.require_subcommand(1);

  ScenarioSelection run_sel, check_sel;
  double dt_override = 0.0;
  int stride_override = 0;
  std::string out_dir = "out";
  bool no_plots = false;

  CLI::App* run_cmd = app.add_subcommand("run", "integrate a scenario and write trace/report/plots");
  run_cmd->add_option("--scenario", run_sel.path, "scenario JSON file");
  run_cmd->add_option("--case", run_sel.case_id, "ROV preset case")->check(CLI::Range(1, 3));
  run_cmd->add_option("--dt", dt_override, "integration step override (s)");
  run_cmd->add_option("--stride", stride_override, "record every k-th step");
  run_cmd->add_option("--out", out_dir, "output directory (default: out)");
  run_cmd->add_flag("--no-plots", no_plots, "skip the SVG plots");

  CLI::App* check_cmd = app.add_subcommand("check", "validate a scenario without running it");
  check_cmd->add_option("--scenario", check_sel.path, "scenario JSON file");
  check_cmd->add_option("--case", check_sel.case_id, "ROV preset case")->check(CLI::Range(1, 3));

  CLI::App* acc_cmd = app.add_subcommand("acceptance", "run the acceptance suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      return cmd_run(run_sel, dt_override, stride_override, out_dir, no_plots);
    }
    if (check_cmd->parsed()) {
      return cmd_check(check_sel);
    }
    if (acc_cmd->parsed()) {
      const auto results = docsim::run_acceptance(std::cout);
      return docsim::all_passed(results) ? 0 : 1;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
