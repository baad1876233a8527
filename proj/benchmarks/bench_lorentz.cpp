#include <benchmark/benchmark.h>

#include <random>

#include "kslab/lorentz.hpp"

using namespace kslab;

namespace {

std::vector<double> corpus(std::size_t n) {
  std::mt19937_64 rng(1234);
  std::normal_distribution<double> dist;
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

void BM_Rearrangement(benchmark::State& state) {
  auto values = corpus(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto profile = decreasing_rearrangement(values, 0.01);
    benchmark::DoNotOptimize(profile.total_measure);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Rearrangement)->Range(1 << 10, 1 << 18)->Complexity(benchmark::oNLogN);

void BM_WeakNorm(benchmark::State& state) {
  auto values = corpus(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(lorentz_norm(values, 0.01, {2.0, kInf}));
  }
}
BENCHMARK(BM_WeakNorm)->Range(1 << 10, 1 << 18);

void BM_FiniteQNorm(benchmark::State& state) {
  auto values = corpus(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(lorentz_norm(values, 0.01, {2.5, 1.5}));
  }
}
BENCHMARK(BM_FiniteQNorm)->Range(1 << 10, 1 << 18);

}  // namespace
