#include <gtest/gtest.h>

#include "blastvox/boundary/boundary.hpp"
#include "blastvox/fluidcore/fluid_grid.hpp"
#include "blastvox/integrator/integrator.hpp"

namespace blastvox {
namespace {

FluidGrid ambientGrid(int n, const PhysicalConstants& k) {
  FluidGrid g({n, n, n}, 1.0);
  initAmbient(g, kAtmosphere, 290.0, k);
  return g;
}

TEST(Ghost, HardFaceMirrorsNormalVelocity) {
  PhysicalConstants k;
  FluidGrid g = ambientGrid(3, k);
  const std::size_t idx = g.dims().index(0, 1, 1);
  g.at(idx).v = Vec3(3.0, 1.0, 0.0);
  const VoxelState ghost = ghostValue(g, idx, 0, -1, BoundarySpec::allHard(), k);
  EXPECT_EQ(ghost.v, Vec3(-3.0, 1.0, 0.0));
  EXPECT_EQ(ghost.rho, g.at(idx).rho);
  EXPECT_EQ(ghost.P, g.at(idx).P);
  EXPECT_EQ(ghost.T, g.at(idx).T);
}

TEST(Ghost, FreeFaceIsAmbient) {
  PhysicalConstants k;
  FluidGrid g = ambientGrid(3, k);
  const std::size_t idx = g.dims().index(2, 1, 1);
  g.at(idx).v = Vec3(30.0, 0.0, 0.0);
  g.at(idx).P = 5.0 * kAtmosphere;
  const VoxelState ghost = ghostValue(g, idx, 0, +1, BoundarySpec::allFree(), k);
  EXPECT_EQ(ghost.v, Vec3::Zero());
  EXPECT_DOUBLE_EQ(ghost.P, kAtmosphere);
  EXPECT_DOUBLE_EQ(ghost.T, 290.0);
}

TEST(Ghost, SolidNeighbourMirrors) {
  PhysicalConstants k;
  FluidGrid g = ambientGrid(3, k);
  const std::size_t idx = g.dims().index(1, 1, 1);
  g.at(idx + 1).partial_volume = 0.0;
  g.at(idx).v = Vec3(2.0, 5.0, 0.0);
  const VoxelState ghost = ghostValue(g, idx, 0, +1, BoundarySpec::allFree(), k);
  EXPECT_EQ(ghost.v, Vec3(-2.0, 5.0, 0.0));
}

TEST(Ghost, InteriorNeighbourIsItself) {
  PhysicalConstants k;
  FluidGrid g = ambientGrid(3, k);
  const std::size_t idx = g.dims().index(1, 1, 1);
  g.at(idx + 3).rho = 7.0;
  const VoxelState ghost = ghostValue(g, idx, 1, +1, BoundarySpec::allHard(), k);
  EXPECT_EQ(ghost.rho, 7.0);
}

TEST(ActiveSet, UniformGridIsQuiet) {
  PhysicalConstants k;
  const FluidGrid g = ambientGrid(8, k);
  BoundarySpec spec;
  spec.prune_enabled = true;
  EXPECT_EQ(updateActiveSet(g, spec).size(), 0u);
}

TEST(ActiveSet, DisturbanceActivatesHalo) {
  PhysicalConstants k;
  FluidGrid g = ambientGrid(8, k);
  BoundarySpec spec;
  spec.prune_enabled = true;
  const std::size_t idx = g.dims().index(4, 4, 4);
  g.at(idx).P += 1000.0;
  const ActiveSet set = updateActiveSet(g, spec);
  EXPECT_EQ(set.size(), 7u);
  EXPECT_TRUE(set.contains(idx));
  for (int axis = 0; axis < 3; ++axis) {
    EXPECT_TRUE(set.contains(idx + g.dims().stride(axis)));
    EXPECT_TRUE(set.contains(idx - g.dims().stride(axis)));
  }
}

TEST(ActiveSet, MovingAirIsActive) {
  PhysicalConstants k;
  FluidGrid g = ambientGrid(8, k);
  BoundarySpec spec;
  spec.prune_enabled = true;
  const std::size_t idx = g.dims().index(1, 1, 1);
  g.at(idx).v.z() = 0.5;
  const ActiveSet set = updateActiveSet(g, spec);
  EXPECT_EQ(set.size(), 1u);
  EXPECT_TRUE(set.contains(idx));
}

TEST(ActiveSet, ForcedCellsAreKept) {
  PhysicalConstants k;
  const FluidGrid g = ambientGrid(4, k);
  BoundarySpec spec;
  spec.prune_enabled = true;
  std::vector<std::uint8_t> forced(g.size(), 0);
  forced[5] = 1;
  const ActiveSet set = updateActiveSet(g, spec, forced);
  EXPECT_TRUE(set.contains(5));
}

TEST(ActiveSet, PruningOffMeansEverything) {
  PhysicalConstants k;
  const FluidGrid g = ambientGrid(4, k);
  BoundarySpec spec;
  spec.prune_enabled = false;
  EXPECT_EQ(updateActiveSet(g, spec).size(), g.size());
  EXPECT_EQ(fullActiveSet(g).size(), g.size());
}

TEST(DilateMask, ChebyshevRadius) {
  const GridDims d{7, 7, 7};
  std::vector<std::uint8_t> seed(d.count(), 0);
  seed[d.index(3, 3, 3)] = 1;
  const auto out = dilateMask(d, seed, 1);
  std::size_t n = 0;
  for (auto m : out) n += m;
  EXPECT_EQ(n, 27u);
  EXPECT_TRUE(out[d.index(2, 2, 2)]);
  EXPECT_FALSE(out[d.index(1, 3, 3)]);
}

TEST(BoundarySpec, ValidatesThresholds) {
  BoundarySpec spec;
  spec.prune_threshold = -1.0;
  EXPECT_THROW(spec.validate(), std::exception);
}

TEST(Boundaries, ClosedBoxHoldsMass) {
  PhysicalConstants k;
  k.g = Vec3::Zero();
  FluidGrid g = ambientGrid(10, k);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      g.at(i, j, 0) = stateFromPT(20.0 * kAtmosphere, 900.0, k);
    }
  }
  const double m0 = totalMass(g);
  Integrator integ;
  StepContext ctx;
  ctx.dt = 1e-4;
  ctx.consts = k;
  ctx.boundary = BoundarySpec::allHard();
  for (int s = 0; s < 200; ++s) integ.step(g, ctx);
  EXPECT_NEAR(totalMass(g) / m0, 1.0, 1e-12);
}

TEST(Boundaries, FreeAmbientStaysAmbient) {
  PhysicalConstants k;
  k.g = Vec3::Zero();
  FluidGrid g = ambientGrid(6, k);
  const VoxelState air = g.at(0);
  Integrator integ;
  StepContext ctx;
  ctx.dt = 1e-4;
  ctx.consts = k;
  ctx.boundary = BoundarySpec::allFree();
  for (int s = 0; s < 50; ++s) integ.step(g, ctx);
  for (const VoxelState& c : g.current()) {
    ASSERT_EQ(c.rho, air.rho);
    ASSERT_EQ(c.v, Vec3::Zero());
    ASSERT_EQ(c.N, air.N);
    ASSERT_EQ(c.P, air.P);
  }
}

}  // namespace
}  // namespace blastvox
