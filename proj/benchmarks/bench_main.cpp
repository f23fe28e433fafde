#include <benchmark/benchmark.h>

#include "blastvox/effects/refraction.hpp"
#include "blastvox/geometry/charge.hpp"
#include "blastvox/geometry/primitives.hpp"
#include "blastvox/geometry/voxelize.hpp"
#include "blastvox/integrator/integrator.hpp"

using namespace blastvox;

namespace {

FluidGrid blastBox(int n, PhysicalConstants& consts) {
  consts.g = Vec3::Zero();
  FluidGrid grid({n, n, n}, 1.0);
  initAmbient(grid, kAtmosphere, 290.0, consts);
  const Vec3 c = Vec3::Constant(0.5 * n);
  const auto cells = chargeCells(makeSphere(c, 0.12 * n, 8), {grid.dims(), 1.0, Vec3::Zero()});
  igniteCharge(grid, cells, 1000.0 * kAtmosphere, 2900.0, consts);
  return grid;
}

void BM_FluidStep(benchmark::State& state) {
  PhysicalConstants consts;
  FluidGrid grid = blastBox(static_cast<int>(state.range(0)), consts);
  Integrator integ;
  StepContext ctx;
  ctx.dt = 1e-4;
  ctx.consts = consts;
  ctx.boundary = BoundarySpec::allHard();
  ctx.boundary.prune_enabled = state.range(1) != 0;
  for (auto _ : state) {
    integ.step(grid, ctx);
    benchmark::DoNotOptimize(grid.at(0).P);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}
BENCHMARK(BM_FluidStep)->Args({32, 0})->Args({32, 1})->Args({51, 0})->Unit(benchmark::kMillisecond);

void BM_Voxelize(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const TriangleMesh sphere = makeSphere(Vec3::Constant(0.5 * n), 0.3 * n, 16);
  const GridSpec spec{{n, n, n}, 1.0, Vec3::Zero()};
  for (auto _ : state) {
    auto free = voxelize(sphere, spec);
    benchmark::DoNotOptimize(free.data());
  }
}
BENCHMARK(BM_Voxelize)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_RefractRay(benchmark::State& state) {
  PhysicalConstants consts;
  const FluidGrid grid = blastBox(32, consts);
  const ScalarVolume vol = ScalarVolume::density(grid);
  RefractionConfig cfg;
  cfg.exaggeration = 100.0;
  const Ray ray{Vec3(-1.0, 15.7, 16.3), Vec3::UnitX()};
  for (auto _ : state) {
    const RayPath p = refractRay(vol, ray, cfg);
    benchmark::DoNotOptimize(p.direction);
  }
}
BENCHMARK(BM_RefractRay);

}  // namespace

BENCHMARK_MAIN();
