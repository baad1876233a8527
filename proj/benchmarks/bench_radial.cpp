#include <benchmark/benchmark.h>

#include "kslab/params.hpp"
#include "kslab/radial.hpp"

using namespace kslab;

namespace {

void BM_CrankNicolsonStep(benchmark::State& state) {
  auto grid = make_radial_grid(3, static_cast<int>(state.range(0)), 20.0);
  CrankNicolsonStepper stepper(grid, 0.4 * grid.spacing());
  RadialField u = radial_bump(grid, 1.0, 1.0);
  for (auto _ : state) {
    u = stepper.step(u);
    benchmark::DoNotOptimize(u.values().data());
  }
}
BENCHMARK(BM_CrankNicolsonStep)->Arg(401)->Arg(1601)->Arg(6401);

void BM_EllipticInverseRadial(benchmark::State& state) {
  auto grid = make_radial_grid(3, static_cast<int>(state.range(0)), 20.0);
  RadialField f = radial_bump(grid, 2.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(elliptic_inverse(f, 1.0, 1.0).values().data());
  }
}
BENCHMARK(BM_EllipticInverseRadial)->Arg(401)->Arg(1601)->Arg(6401);

void BM_RadialLaplacian(benchmark::State& state) {
  auto grid = make_radial_grid(3, static_cast<int>(state.range(0)), 20.0);
  RadialField f = radial_bump(grid, 2.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(radial_laplacian(f).values().data());
  }
}
BENCHMARK(BM_RadialLaplacian)->Arg(401)->Arg(1601)->Arg(6401);

}  // namespace
