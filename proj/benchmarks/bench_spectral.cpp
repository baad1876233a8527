#include <benchmark/benchmark.h>

#include "kslab/duhamel.hpp"
#include "kslab/estimates.hpp"

using namespace kslab;

namespace {

void BM_HeatApply2D(benchmark::State& state) {
  auto grid = make_torus_grid(2, static_cast<int>(state.range(0)), 10.0);
  std::mt19937_64 rng(5);
  TorusField f = random_bump_field(grid, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(heat_apply(f, 0.1).values().data());
  }
}
BENCHMARK(BM_HeatApply2D)->Arg(64)->Arg(128)->Arg(256);

void BM_NonlinearTerm2D(benchmark::State& state) {
  auto grid = make_torus_grid(2, static_cast<int>(state.range(0)), 10.0);
  KSParams params;
  params.kappa = 1.0;
  params.gamma = 1.0;
  params.dim = 2;
  ForcingSpec forcing;
  forcing.period = 2.0;
  forcing.amplitude = 0.05;
  TorusCalculus calc(grid, params, forcing);
  std::mt19937_64 rng(6);
  TorusField u = apply_zero_mode_policy(random_bump_field(grid, rng));
  for (auto _ : state) {
    benchmark::DoNotOptimize(calc.nonlinear_term(u, 0.3).values().data());
  }
}
BENCHMARK(BM_NonlinearTerm2D)->Arg(64)->Arg(128)->Arg(256);

void BM_Etd2rkStep2D(benchmark::State& state) {
  auto grid = make_torus_grid(2, static_cast<int>(state.range(0)), 10.0);
  KSParams params;
  params.kappa = 1.0;
  params.gamma = 1.0;
  params.dim = 2;
  ForcingSpec forcing;
  forcing.period = 2.0;
  forcing.amplitude = 0.05;
  TorusCalculus calc(grid, params, forcing);
  std::mt19937_64 rng(7);
  TorusField u = apply_zero_mode_policy(random_bump_field(grid, rng));
  for (auto _ : state) {
    u = etd_step(calc, u, 0.0, 1e-3, Scheme::etd2rk);
    benchmark::DoNotOptimize(u.values().data());
  }
}
BENCHMARK(BM_Etd2rkStep2D)->Arg(64)->Arg(128);

}  // namespace
