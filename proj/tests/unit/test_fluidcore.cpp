#include <gtest/gtest.h>

#include <cmath>

#include "blastvox/errors.hpp"
#include "blastvox/fluidcore/constants.hpp"
#include "blastvox/fluidcore/fluid_grid.hpp"
#include "blastvox/fluidcore/voxel_state.hpp"

namespace blastvox {
namespace {

TEST(StateEquations, InternalEnergyGivesTemperature) {
  PhysicalConstants k;
  VoxelState c;
  c.rho = 1.2;
  c.N = 208075.0;
  syncInPlace(c, k);
  EXPECT_NEAR(c.T, 290.0, 1e-9);
}

TEST(StateEquations, IdealGasPressure) {
  PhysicalConstants k;
  VoxelState c;
  c.rho = 1.2;
  c.N = k.c_v * 290.0;
  syncInPlace(c, k);
  EXPECT_NEAR(c.P, 99876.0, 1e-6);
}

TEST(StateEquations, ZeroEnergyIsCold) {
  PhysicalConstants k;
  for (double rho : {0.0, 1.0, 50.0}) {
    VoxelState c;
    c.rho = rho;
    syncInPlace(c, k);
    EXPECT_EQ(c.T, 0.0);
    EXPECT_EQ(c.P, 0.0);
  }
}

TEST(StateEquations, SyncIsIdempotent) {
  PhysicalConstants k;
  VoxelState c;
  c.rho = 3.7;
  c.N = 1.234567e6;
  const VoxelState once = syncStateEquations(c, k);
  const VoxelState twice = syncStateEquations(once, k);
  EXPECT_EQ(once.T, twice.T);
  EXPECT_EQ(once.P, twice.P);
}

TEST(StateEquations, InvertsPressureAndTemperature) {
  PhysicalConstants k;
  const VoxelState c = stateFromPT(kAtmosphere, 290.0, k);
  EXPECT_NEAR(c.rho, 101325.0 / (287.0 * 290.0), 1e-12);
  EXPECT_NEAR(c.rho, 1.2174, 1e-4);
  EXPECT_NEAR(c.P, kAtmosphere, 1e-8);
  EXPECT_NEAR(c.N, k.c_v * 290.0, 1e-8);
}

TEST(StateEquations, RejectsNonPositiveInputs) {
  PhysicalConstants k;
  FluidGrid g({2, 2, 2}, 1.0);
  EXPECT_THROW(initAmbient(g, 0.0, 290.0, k), ConfigError);
  EXPECT_THROW(initAmbient(g, kAtmosphere, -1.0, k), ConfigError);
}

TEST(StateEquations, SoundSpeedOfAir) {
  PhysicalConstants k;
  EXPECT_NEAR(k.gamma(), 1.4, 1e-15);
  const VoxelState c = stateFromPT(kAtmosphere, 290.0, k);
  EXPECT_NEAR(soundSpeed(c, k), std::sqrt(1.4 * 287.0 * 290.0), 1e-9);
}

TEST(FluidGrid, AmbientTotals) {
  PhysicalConstants k;
  FluidGrid g({10, 10, 10}, 1.0);
  initAmbient(g, kAtmosphere, 290.0, k);
  const double rho = kAtmosphere / (287.0 * 290.0);
  EXPECT_NEAR(totalMass(g), 1000.0 * rho, 1e-9);
  EXPECT_NEAR(totalMass(g), 1217.4, 0.05);
  EXPECT_NEAR(totalEnergy(g), 1000.0 * rho * k.c_v * 290.0, 1e-3);
  EXPECT_EQ(totalMomentum(g), Vec3::Zero());
}

TEST(FluidGrid, EmptyGridHasNoMass) {
  PhysicalConstants k;
  FluidGrid g({4, 4, 4}, 1.0);
  initAmbient(g, kAtmosphere, 290.0, k);
  for (auto& c : g.current()) c.partial_volume = 0.0;
  EXPECT_EQ(totalMass(g), 0.0);
}

TEST(FluidGrid, PartialVolumeScalesMass) {
  PhysicalConstants k;
  FluidGrid g({2, 1, 1}, 2.0);
  initAmbient(g, kAtmosphere, 290.0, k);
  g.at(0).partial_volume = 0.25;
  const double rho = g.at(1).rho;
  EXPECT_NEAR(totalMass(g), 1.25 * 8.0 * rho, 1e-12);
}

TEST(FluidGrid, IndexingAndCentres) {
  FluidGrid g({3, 4, 5}, 0.5, Vec3(1.0, 2.0, 3.0));
  EXPECT_EQ(g.size(), 60u);
  const std::size_t idx = g.dims().index(2, 1, 3);
  EXPECT_EQ(g.dims().coord(idx), (Index3{2, 1, 3}));
  EXPECT_TRUE(g.center(idx).isApprox(Vec3(2.25, 2.75, 4.75)));
  EXPECT_TRUE(g.extentMax().isApprox(Vec3(2.5, 4.0, 5.5)));
}

TEST(FluidGrid, ChecksumTracksState) {
  PhysicalConstants k;
  FluidGrid a({6, 6, 6}, 1.0);
  FluidGrid b({6, 6, 6}, 1.0);
  initAmbient(a, kAtmosphere, 290.0, k);
  initAmbient(b, kAtmosphere, 290.0, k);
  EXPECT_EQ(checksum(a), checksum(b));
  b.at(17).v.x() = std::nextafter(0.0, 1.0);
  EXPECT_NE(checksum(a), checksum(b));
}

}  // namespace
}  // namespace blastvox
