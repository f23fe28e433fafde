#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "blastvox/boundary/boundary.hpp"
#include "blastvox/fluidcore/fluid_grid.hpp"
#include "blastvox/integrator/integrator.hpp"

namespace blastvox {
namespace {

PhysicalConstants noGravity() {
  PhysicalConstants k;
  k.g = Vec3::Zero();
  return k;
}

FluidGrid line(int n, double h, const PhysicalConstants& k) {
  FluidGrid g({n, 1, 1}, h);
  initAmbient(g, kAtmosphere, 290.0, k);
  return g;
}

double dissipationOracle(const Mat3& grad, double mu) {
  const double div = grad(0, 0) + grad(1, 1) + grad(2, 2);
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) sum += std::pow(grad(i, j) + grad(j, i), 2);
  }
  return -2.0 * mu / 3.0 * div * div + mu / 2.0 * sum;
}

TEST(Acceleration, CentralPressureDifference) {
  PhysicalConstants k = noGravity();
  k.mu = 0.0;
  FluidGrid g = line(3, 1.0, k);
  for (int i = 0; i < 3; ++i) {
    VoxelState& c = g.at(i);
    c.rho = 1.2;
    c.P = 1.0e5 + 100.0 * (i - 1);
    c.T = c.P / (c.rho * k.R);
    c.N = k.c_v * c.T;
  }
  const Vec3 a = nonConvectiveAcceleration(g, 1, k, BoundarySpec::allHard());
  EXPECT_NEAR(a.x(), -(200.0 / 2.0) / 1.2, 1e-9);
  EXPECT_NEAR(a.x(), -83.333, 1e-3);
  EXPECT_EQ(a.y(), 0.0);
  EXPECT_EQ(a.z(), 0.0);
}

TEST(Acceleration, UniformFieldAtRest) {
  const PhysicalConstants k = noGravity();
  FluidGrid g({8, 8, 8}, 1.0);
  initAmbient(g, kAtmosphere, 290.0, k);
  for (auto& c : g.current()) c.v = Vec3(3.0, -1.0, 2.0);
  const Vec3 a = nonConvectiveAcceleration(g, g.dims().index(4, 4, 4), k, BoundarySpec::allFree());
  EXPECT_EQ(a, Vec3::Zero());
}

TEST(Acceleration, GravityOnly) {
  const PhysicalConstants k;
  FluidGrid g({4, 4, 4}, 1.0);
  initAmbient(g, kAtmosphere, 290.0, k);
  const Vec3 a = nonConvectiveAcceleration(g, g.dims().index(1, 2, 1), k, BoundarySpec::allFree());
  EXPECT_EQ(a, Vec3(0.0, 0.0, -9.81));
}

TEST(Acceleration, EmptyCellDoesNotAccelerate) {
  const PhysicalConstants k;
  FluidGrid g = line(3, 1.0, k);
  g.at(0).P = 10.0 * kAtmosphere;
  g.at(1).rho = 0.0;
  g.at(1).N = 0.0;
  syncInPlace(g.at(1), k);
  EXPECT_EQ(nonConvectiveAcceleration(g, 1, k, BoundarySpec::allHard()), Vec3::Zero());
}

TEST(Dissipation, MatchesDirectEvaluation) {
  const double mu = 1.8e-5;
  Mat3 shear = Mat3::Zero();
  shear(0, 1) = 250.0;
  EXPECT_NEAR(viscousDissipation(shear, mu), dissipationOracle(shear, mu), 1e-15);
  EXPECT_NEAR(viscousDissipation(shear, mu), mu * 250.0 * 250.0, 1e-12);
  Mat3 compress = Mat3::Zero();
  compress(0, 0) = -40.0;
  EXPECT_NEAR(viscousDissipation(compress, mu), 4.0 / 3.0 * mu * 1600.0, 1e-12);
  Mat3 general;
  general << 1.0, -2.0, 0.5, 3.0, 0.25, -4.0, 0.0, 7.0, -1.5;
  EXPECT_NEAR(viscousDissipation(general, mu), dissipationOracle(general, mu), 1e-15);
  EXPECT_EQ(viscousDissipation(Mat3::Zero(), mu), 0.0);
}

TEST(Energy, RestingIsothermalAirIsUnchanged) {
  const PhysicalConstants k = noGravity();
  FluidGrid g({5, 5, 5}, 1.0);
  initAmbient(g, kAtmosphere, 290.0, k);
  Integrator integ;
  StepContext ctx;
  ctx.consts = k;
  ctx.boundary = BoundarySpec::allHard();
  integ.stepNonConvective(g, ctx);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(integ.nonConvectiveEnergy()[i], g.at(i).N);
}

TEST(Energy, CompressionHeats) {
  PhysicalConstants k = noGravity();
  k.mu = 0.0;
  FluidGrid g = line(5, 1.0, k);
  for (int i = 0; i < 5; ++i) g.at(i).v.x() = -(i - 2) * 1.0;
  Integrator integ;
  StepContext ctx;
  ctx.dt = 1e-4;
  ctx.consts = k;
  ctx.boundary = BoundarySpec::allHard();
  integ.stepNonConvective(g, ctx);
  const VoxelState& c = g.at(2);
  const double dN = integ.nonConvectiveEnergy()[2] - c.N;
  EXPECT_GT(dN, 0.0);
  EXPECT_NEAR(dN, ctx.dt * c.P * 1.0 / c.rho, 1e-9 * dN);
}

TEST(DonorAcceptor, DenserDonorUpstream) {
  FaceSide i{2.0, Vec3::Zero(), 0.0, 1.0, 1.0};
  FaceSide j{1.0, Vec3::Zero(), 0.0, 1.0, 1.0};
  const FaceFlux f = donorAcceptorFlux(i, j, 1.0, 0.1, 1.0);
  EXPECT_NEAR(f.lowerDensityChange(1.0, 1.0), -0.2, 1e-15);
  EXPECT_NEAR(f.upperDensityChange(1.0, 1.0), 0.2, 1e-15);
}

TEST(DonorAcceptor, ReversedFlowSwitchesDonor) {
  FaceSide i{2.0, Vec3::Zero(), 0.0, 1.0, 1.0};
  FaceSide j{1.0, Vec3::Zero(), 0.0, 1.0, 1.0};
  const FaceFlux f = donorAcceptorFlux(i, j, -1.0, 0.1, 1.0);
  EXPECT_NEAR(f.lowerDensityChange(1.0, 1.0), 0.1, 1e-15);
  EXPECT_NEAR(f.upperDensityChange(1.0, 1.0), -0.1, 1e-15);
  const FaceFlux mirrored = donorAcceptorFlux(j, i, 1.0, 0.1, 1.0);
  EXPECT_EQ(mirrored.mass, -f.mass);
}

TEST(DonorAcceptor, StillFaceTransfersNothing) {
  FaceSide i{2.0, Vec3(1.0, 2.0, 3.0), 5.0e5, 1.0, 1.0};
  FaceSide j{1.0, Vec3::Zero(), 2.0e5, 1.0, 1.0};
  const FaceFlux f = donorAcceptorFlux(i, j, 0.0, 0.1, 1.0);
  EXPECT_EQ(f.mass, 0.0);
  EXPECT_EQ(f.momentum, Vec3::Zero());
  EXPECT_EQ(f.energy, 0.0);
}

TEST(DonorAcceptor, CarriesDonorMomentumAndEnergy) {
  FaceSide i{2.0, Vec3(4.0, 1.0, 0.0), 3.0e5, 1.0, 1.0};
  FaceSide j{1.0, Vec3(-1.0, 0.0, 0.0), 1.0e5, 0.5, 1.0};
  const FaceFlux f = donorAcceptorFlux(i, j, 2.0, 0.01, 0.5);
  EXPECT_DOUBLE_EQ(f.mass, 2.0 * 0.01 * 0.25 * 0.5 * 2.0);
  EXPECT_TRUE(f.momentum.isApprox(f.mass * i.v));
  EXPECT_DOUBLE_EQ(f.energy, f.mass * i.E);
}

TEST(DonorAcceptor, FlippingVelocitiesFlipsDonors) {
  const FaceSide a{1.7, Vec3(2.0, 0.0, 0.0), 2.0e5, 0.8, 1.0};
  const FaceSide b{0.4, Vec3(-3.0, 1.0, 0.0), 4.0e5, 1.0, 0.5};
  for (double u : {0.3, -0.3, 12.0, -7.5}) {
    const FaceFlux f = donorAcceptorFlux(a, b, u, 1e-3, 0.2);
    const FaceFlux g = donorAcceptorFlux(b, a, -u, 1e-3, 0.2);
    EXPECT_EQ(f.mass, -g.mass);
    EXPECT_EQ(f.energy, -g.energy);
  }
}

TEST(Step, UniformConvectionIsExact) {
  const PhysicalConstants k = noGravity();
  FluidGrid g({16, 16, 16}, 1.0);
  initAmbient(g, kAtmosphere, 290.0, k);
  for (auto& c : g.current()) c.v = Vec3(10.0, 0.0, 0.0);
  const VoxelState before = g.at(8, 8, 8);
  Integrator integ;
  StepContext ctx;
  ctx.dt = 1e-4;
  ctx.consts = k;
  ctx.boundary = BoundarySpec::allFree();
  integ.step(g, ctx);
  const VoxelState& after = g.at(8, 8, 8);
  EXPECT_NEAR(after.rho, before.rho, 1e-12 * before.rho);
  EXPECT_NEAR(after.N, before.N, 1e-12 * before.N);
  EXPECT_NEAR((after.v - before.v).norm(), 0.0, 1e-12 * before.v.norm());
}

TEST(Step, ShockMovesOutward) {
  const PhysicalConstants k = noGravity();
  FluidGrid g = line(40, 0.1, k);
  for (int i = 0; i < 3; ++i) g.at(i) = stateFromPT(20.0 * kAtmosphere, 290.0, k);
  Integrator integ;
  StepContext ctx;
  ctx.dt = 2e-6;
  ctx.consts = k;
  ctx.boundary = BoundarySpec::allHard();
  int near = -1;
  int far = -1;
  for (int s = 0; s < 4000 && far < 0; ++s) {
    integ.step(g, ctx);
    if (near < 0 && g.at(7).P > kAtmosphere + 1000.0) near = s;
    if (far < 0 && g.at(12).P > kAtmosphere + 1000.0) far = s;
  }
  ASSERT_GE(near, 0);
  ASSERT_GE(far, 0);
  EXPECT_LT(near, far);
}

TEST(Step, LessDampingThanUpwindAdvection) {
  const PhysicalConstants k = noGravity();
  const int n = 200;
  const double h = 0.01;
  FluidGrid g = line(n, h, k);
  const VoxelState air = g.at(0);
  const double c = soundSpeed(air, k);
  const double amp = 0.02 * kAtmosphere;
  std::vector<double> profile(n);
  for (int i = 0; i < n; ++i) {
    const double x = i - 40.0;
    profile[i] = amp * std::exp(-x * x / 9.0);
    VoxelState& cell = g.at(i);
    cell.rho = air.rho + profile[i] / (c * c);
    cell.P = air.P + profile[i];
    cell.v.x() = profile[i] / (air.rho * c);
    cell.T = cell.P / (cell.rho * k.R);
    cell.N = k.c_v * cell.T;
  }
  const double dt = 0.25 * h / c;
  const int steps = static_cast<int>(std::lround(20.0 * h / (c * dt)));
  Integrator integ;
  StepContext ctx;
  ctx.dt = dt;
  ctx.consts = k;
  ctx.boundary = BoundarySpec::allFree();
  for (int s = 0; s < steps; ++s) integ.step(g, ctx);
  double peak = 0.0;
  for (int i = 0; i < n; ++i) peak = std::max(peak, g.at(i).P - air.P);

  // First-order upwind advection of the same profile at the same Courant number.
  const double nu = c * dt / h;
  std::vector<double> q = profile;
  std::vector<double> next(n);
  for (int s = 0; s < steps; ++s) {
    next[0] = q[0];
    for (int i = 1; i < n; ++i) next[i] = q[i] - nu * (q[i] - q[i - 1]);
    q.swap(next);
  }
  const double upwind_peak = *std::max_element(q.begin(), q.end());
  EXPECT_GT(peak, upwind_peak);
}

TEST(Step, DiagnosticsReportCfl) {
  const PhysicalConstants k = noGravity();
  FluidGrid g = line(8, 1.0, k);
  Integrator integ;
  StepContext ctx;
  ctx.dt = 1e-3;
  ctx.consts = k;
  ctx.boundary = BoundarySpec::allHard();
  integ.step(g, ctx);
  const double cfl = soundSpeed(g.at(0), k) * ctx.dt / 1.0;
  EXPECT_NEAR(ctx.diagnostics.max_cfl, cfl, 1e-9);
}

}  // namespace
}  // namespace blastvox
