#include <benchmark/benchmark.h>

#include "navslip/dynamics.hpp"
#include "navslip/lame.hpp"
#include "navslip/transport.hpp"

using namespace navslip;

namespace {

PhysParams phys(double k) { return PhysParams(LameParams(0.1, 0.0), 1.0, 1.4, SlipBC(k)); }

void BM_SolveLame(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g = build_grid(1.0, n, n);
  const VectorField f = VectorField::from_function(g, [](double, double, double) {
    return std::array<double, 2>{2.0, 0.0};
  });
  for (auto _ : state) benchmark::DoNotOptimize(solve_lame(f, SlipBC(0.1), LameParams(1.0, 0.0)));
}
BENCHMARK(BM_SolveLame)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_ContinuityStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g = build_grid(1.0, n, n);
  const FluidState s = default_initial_state(g);
  const auto scheme = state.range(1) ? TransportScheme::muscl_minmod : TransportScheme::upwind1;
  for (auto _ : state) benchmark::DoNotOptimize(continuity_step(s.rho, s.u, 1e-3, scheme));
}
BENCHMARK(BM_ContinuityStep)->Args({64, 0})->Args({64, 1})->Args({128, 0})->Args({128, 1});

void BM_Step(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g = build_grid(1.0, n, n);
  const FluidState s = default_initial_state(g);
  const PhysParams p = phys(0.01);
  const StepControl c;
  for (auto _ : state) benchmark::DoNotOptimize(step(s, p, c));
}
BENCHMARK(BM_Step)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
