#include <benchmark/benchmark.h>

#include "docsim/rov.hpp"
#include "docsim/sim.hpp"

namespace {

using namespace docsim;

void BM_WorldStep(benchmark::State& state) {
  World world(preset_case(1));
  for (auto _ : state) {
    world.discrete_update();
    world.step();
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_WorldStep);

void BM_InnerControl(benchmark::State& state) {
  const PlantParams plant = embed_strict_feedback(RovParams{});
  const AdaptiveState a = AdaptiveState::zero(plant.p, plant.m);
  ControlGains gains{{15.0, 15.0}, Eigen::MatrixXd::Identity(14, 14), 1.0, 1.0};
  const Funnel funnel{3.0, 0.5, 0.3, 0.0};
  Eigen::VectorXd x = Eigen::VectorXd::Zero(8);
  x(0) = 0.2;
  Command cmd{Eigen::VectorXd::Zero(4), Eigen::VectorXd::Zero(4),
              Eigen::VectorXd::Zero(4)};
  const Objective obj = quadratic_objective(Eigen::VectorXd::Zero(4));
  for (auto _ : state) {
    const OuterControl oc = outer_control(cmd, obj.hessian(cmd.y_r), plant, x);
    const InnerControl ic = inner_control(x, a, cmd, gains, funnel, plant, 1.0,
                                          oc.alpha_O);
    benchmark::DoNotOptimize(ic.u_I);
  }
}
BENCHMARK(BM_InnerControl);

void BM_RovDeriv(benchmark::State& state) {
  const RovParams p;
  RovState s;
  s.nu << 0.4, -0.2, 0.1, 0.05;
  const Eigen::Vector4d tau(100.0, -50.0, 20.0, 5.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rov_deriv(s, tau, p));
  }
}
BENCHMARK(BM_RovDeriv);

void BM_LaplacianSpectrum(benchmark::State& state) {
  const Graph g = Graph::build(
      static_cast<int>(state.range(0)), [](int n) {
        std::vector<Edge> edges;
        for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 1.0});
        return edges;
      }(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    benchmark::DoNotOptimize(laplacian(g).eigenvalues());
  }
}
BENCHMARK(BM_LaplacianSpectrum)->Arg(8)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
