#include <benchmark/benchmark.h>

#include <random>

#include "moc/dynamics.hpp"
#include "moc/verification.hpp"

namespace {

using namespace moc;

void BM_GammaEval(benchmark::State& state) {
  const ObstacleSpec o = obstacle_from_radii(Vec{{-9, 0, 0}}, Vec{{3.6, 2, 3}}, IVec{{1, 2, 8}});
  const Vec x{{-14, 1, 0.5}};
  for (auto _ : state) benchmark::DoNotOptimize(gamma_eval(o, x));
}
BENCHMARK(BM_GammaEval);

void BM_Basis3d(benchmark::State& state) {
  const ObstacleSpec o = obstacle_from_radii(Vec{{-9, 0, 0}}, Vec{{3.6, 3.6, 3.6}}, IVec{{1, 1, 1}});
  const GammaEval g = gamma_eval(o, Vec{{-14, 1, 0.5}});
  for (auto _ : state) benchmark::DoNotOptimize(basis_3d(g, CoordinateVariant::XY));
}
BENCHMARK(BM_Basis3d);

void BM_Basis3dByRotations(benchmark::State& state) {
  const ObstacleSpec o = obstacle_from_radii(Vec{{-9, 0, 0}}, Vec{{3.6, 3.6, 3.6}}, IVec{{1, 1, 1}});
  const GammaEval g = gamma_eval(o, Vec{{-14, 1, 0.5}});
  for (auto _ : state) benchmark::DoNotOptimize(basis_3d_by_rotations(g, CoordinateVariant::XY));
}
BENCHMARK(BM_Basis3dByRotations);

Scenario scene(int dim, int obstacles) {
  std::mt19937_64 rng(5);
  Scenario s;
  do {
    s = random_scenario(rng, dim, Method::OAMOC);
  } while (static_cast<int>(s.obstacles.size()) != obstacles);
  return s;
}

void BM_Step(benchmark::State& state) {
  const Scenario s = scene(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const ModulationHistory h(s.policy.consistency);
  for (auto _ : state) benchmark::DoNotOptimize(step_oamoc(s.starts[0], s, h));
}
BENCHMARK(BM_Step)->Args({2, 1})->Args({2, 4})->Args({3, 1})->Args({3, 4});

void BM_SimulateHeadOn(benchmark::State& state) {
  Scenario s;
  s.dim = 2;
  s.field = LinearAttractor{Vec{{0, 0}}};
  s.obstacles = {obstacle_from_radii(Vec{{-9, 0}}, Vec{{3.6, 3.6}}, IVec{{1, 1}})};
  s.starts = {Vec{{-18, 0}}};
  for (auto _ : state) benchmark::DoNotOptimize(simulate(s));
}
BENCHMARK(BM_SimulateHeadOn)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
