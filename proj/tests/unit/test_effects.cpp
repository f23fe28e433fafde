#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "blastvox/effects/blackbody.hpp"
#include "blastvox/effects/camera.hpp"
#include "blastvox/effects/dust.hpp"
#include "blastvox/effects/refraction.hpp"
#include "blastvox/effects/splat.hpp"
#include "blastvox/effects/tracers.hpp"
#include "blastvox/fluidcore/fluid_grid.hpp"
#include "blastvox/geometry/primitives.hpp"

namespace blastvox {
namespace {

constexpr double kPi = std::numbers::pi;

FluidGrid stillAir(int n, double h, const PhysicalConstants& k) {
  FluidGrid g({n, n, n}, h);
  initAmbient(g, kAtmosphere, 290.0, k);
  return g;
}

TEST(Blackbody, ColdIsTransparentBlack) {
  const Rgba c = blackbodyColor(0.0);
  EXPECT_EQ(c.r, 0.0);
  EXPECT_EQ(c.g, 0.0);
  EXPECT_EQ(c.b, 0.0);
  EXPECT_EQ(c.a, 0.0);
}

TEST(Blackbody, ChannelsRiseWithTemperature) {
  Rgba last = blackbodyColor(300.0);
  for (double T = 310.0; T <= 20000.0; T += 10.0) {
    const Rgba c = blackbodyColor(T);
    ASSERT_GE(c.r, last.r) << T;
    ASSERT_GE(c.g, last.g) << T;
    ASSERT_GE(c.b, last.b) << T;
    ASSERT_GE(c.a, last.a) << T;
    last = c;
  }
}

TEST(Blackbody, HotterIsBluer) {
  const Rgba warm = blackbodyColor(2900.0);
  const Rgba hot = blackbodyColor(1e5);
  EXPECT_GT(warm.r / warm.b, hot.r / hot.b);
  EXPECT_NEAR(std::max({warm.r, warm.g, warm.b}), 1.0, 1e-12);
}

TEST(Blackbody, PlanckPeakFollowsWien) {
  const double T = 5000.0;
  double best = 0.0;
  double best_l = 0.0;
  for (double l = 100e-9; l < 3000e-9; l += 1e-9) {
    const double b = planckRadiance(l, T);
    if (b > best) {
      best = b;
      best_l = l;
    }
  }
  EXPECT_NEAR(best_l * T, 2.897771955e-3, 2e-9 * T);
}

TEST(Tracers, SeedingIsUniform) {
  const TriangleMesh cube = makeBox(Vec3::Zero(), Vec3::Ones());
  const auto t = seedTracers(cube, 10000, 7);
  ASSERT_EQ(t.size(), 10000u);
  Vec3 mean = Vec3::Zero();
  for (const auto& p : t) {
    EXPECT_TRUE((p.position.array() >= 0.0).all() && (p.position.array() <= 1.0).all());
    mean += p.position;
  }
  mean /= 10000.0;
  for (int a = 0; a < 3; ++a) EXPECT_NEAR(mean[a], 0.5, 0.02);
  EXPECT_TRUE(seedTracers(cube, 0, 7).empty());
  const auto again = seedTracers(cube, 10000, 7);
  EXPECT_EQ(again[1234].position, t[1234].position);
}

TEST(Tracers, FireballVolumeIsSeeded) {
  const TriangleMesh ball = scaledToVolume(makeSphere(Vec3(5, 5, 5), 2.5, 16), 65.4, Vec3(5, 5, 5));
  EXPECT_NEAR(ball.signedVolume(), 65.4, 1e-9);
  for (const auto& p : seedTracers(ball, 200, 3)) EXPECT_LT((p.position - Vec3(5, 5, 5)).norm(), 2.6);
}

TEST(Tracers, UniformFlowStepIsExact) {
  PhysicalConstants k;
  FluidGrid g = stillAir(8, 1.0, k);
  for (auto& c : g.current()) c.v = Vec3(1.0, 0.0, 0.0);
  TracerParticle p;
  p.position = Vec3(3.3, 4.1, 2.7);
  const Vec3 start = p.position;
  advectTracer(p, g, 0.1);
  EXPECT_EQ(p.position.x(), start.x() + 0.1);
  EXPECT_EQ(p.position.y(), start.y());
  EXPECT_EQ(p.position.z(), start.z());
  EXPECT_FALSE(p.frozen);
}

TEST(Tracers, LinearFlowStepIsExact) {
  PhysicalConstants k;
  FluidGrid g = stillAir(10, 1.0, k);
  const double a = 2.0;
  for (std::size_t i = 0; i < g.size(); ++i) g.at(i).v = Vec3(a * g.center(i).x(), 0.0, 0.0);
  TracerParticle p;
  p.position = Vec3(4.3, 5.0, 5.0);
  advectTracer(p, g, 0.01);
  EXPECT_NEAR(p.position.x(), 4.3 + a * 4.3 * 0.01, 1e-12);
}

TEST(Tracers, LeavingTheGridFreezes) {
  PhysicalConstants k;
  FluidGrid g = stillAir(4, 1.0, k);
  for (auto& c : g.current()) c.v = Vec3(0.0, 0.0, 50.0);
  TracerParticle p;
  p.position = Vec3(2.0, 2.0, 3.5);
  advectTracer(p, g, 0.1);
  EXPECT_TRUE(p.frozen);
  EXPECT_LE(p.position.z(), 4.0);
  const Vec3 stuck = p.position;
  advectTracer(p, g, 0.1);
  EXPECT_EQ(p.position, stuck);
}

TEST(Tracers, ColourFollowsTemperature) {
  PhysicalConstants k;
  FluidGrid g = stillAir(4, 1.0, k);
  for (auto& c : g.current()) c = stateFromPT(kAtmosphere, 2900.0, k);
  TracerParticle p;
  p.position = Vec3(2.0, 2.0, 2.0);
  advectTracer(p, g, 0.0);
  EXPECT_NEAR(p.temperature, 2900.0, 1e-9);
  EXPECT_EQ(p.color.a, 1.0);
}

TEST(Effects, NeverChangeTheFluid) {
  PhysicalConstants k;
  FluidGrid g = stillAir(6, 1.0, k);
  for (std::size_t i = 0; i < g.size(); ++i) g.at(i).v = Vec3(0.1 * i, 0.0, -0.05 * i);
  const auto sum = checksum(g);
  std::vector<TracerParticle> t(20);
  for (std::size_t i = 0; i < t.size(); ++i) t[i].position = Vec3(1.0 + 0.2 * i, 3.0, 3.0);
  advectTracers(t, g, 0.01);
  std::vector<DustMetaParticle> d(5);
  for (auto& p : d) p.center = Vec3(3.0, 3.0, 3.0);
  advectDust(d, g, 0.01, k, DustConfig{});
  const ScalarVolume rho = ScalarVolume::density(g);
  refractRay(rho, Ray{Vec3(-1.0, 3.0, 3.0), Vec3::UnitX()}, RefractionConfig{});
  EXPECT_EQ(checksum(g), sum);
}

TEST(Dust, FollowsFlowWithoutGravity) {
  PhysicalConstants k;
  k.g = Vec3::Zero();
  FluidGrid g = stillAir(8, 1.0, k);
  for (auto& c : g.current()) c.v = Vec3(2.0, -1.0, 0.5);
  DustMetaParticle p;
  p.center = Vec3(3.0, 4.0, 3.0);
  p.velocity = Vec3(2.0, -1.0, 0.5);
  const Vec3 start = p.center;
  for (int s = 0; s < 10; ++s) advectDust(p, g, 0.05, k, DustConfig{});
  EXPECT_TRUE(p.center.isApprox(start + 0.5 * Vec3(2.0, -1.0, 0.5), 1e-12));
}

TEST(Dust, TerminalVelocity) {
  PhysicalConstants k;
  FluidGrid g = stillAir(8, 10.0, k);
  DustConfig cfg;
  double last = 0.0;
  for (double d : {5e-6, 20e-6, 80e-6}) {
    DustMetaParticle p;
    p.center = Vec3(40.0, 40.0, 70.0);
    p.diameter = d;
    const double tau = dustRelaxationTime(d, cfg.density, k.mu);
    for (int s = 0; s < 200; ++s) advectDust(p, g, tau / 10.0, k, cfg);
    const double vt = tau * k.g.z();
    EXPECT_NEAR(p.velocity.z(), vt, 1e-6 * std::abs(vt));
    EXPECT_GT(std::abs(vt), last);
    last = std::abs(vt);
  }
}

TEST(Dust, VarianceGrowsAsDiffusion) {
  PhysicalConstants k;
  FluidGrid g = stillAir(6, 1.0, k);
  DustMetaParticle p;
  p.center = Vec3(3.0, 3.0, 3.0);
  p.diameter = 1e-7;
  const double D = dustDiffusivity(290.0, k.mu, p.diameter);
  EXPECT_NEAR(D, kBoltzmann * 290.0 / (3.0 * kPi * k.mu * 1e-7), 1e-30);
  double last = 0.0;
  for (int s = 0; s < 50; ++s) {
    advectDust(p, g, 1e-3, k, DustConfig{});
    ASSERT_GE(p.variance, last);
    last = p.variance;
  }
  EXPECT_NEAR(p.variance, 2.0 * D * 0.05, 1e-12 * 2.0 * D * 0.05);
}

TEST(Dust, SizeSetsCoupling) {
  PhysicalConstants k;
  k.g = Vec3::Zero();
  FluidGrid g = stillAir(8, 1.0, k);
  for (auto& c : g.current()) c.v = Vec3(20.0, 0.0, 0.0);
  DustMetaParticle coarse;
  coarse.center = Vec3(2.0, 4.0, 4.0);
  coarse.diameter = 1e-3;
  DustMetaParticle fine = coarse;
  fine.diameter = 1e-7;
  for (int s = 0; s < 10; ++s) {
    advectDust(coarse, g, 1e-3, k, DustConfig{});
    advectDust(fine, g, 1e-3, k, DustConfig{});
  }
  EXPECT_NEAR(fine.velocity.x(), 20.0, 1e-6);
  EXPECT_LT(coarse.velocity.x(), 0.01 * 20.0);
}

TEST(Dust, SpawningNeedsRateAndBlast) {
  PhysicalConstants k;
  FluidGrid g = stillAir(6, 1.0, k);
  const std::array<bool, 6> ground{false, false, false, false, true, false};
  const auto surface = dustSurfaceCells(g, ground);
  EXPECT_EQ(surface.size(), 36u);
  DustConfig cfg;
  cfg.rate = 1000.0;
  EXPECT_TRUE(spawnDust(g, surface, cfg, 0.01, 1, 0, 0).empty());
  for (const auto idx : surface) g.at(idx).P = kAtmosphere + 2.0 * cfg.overpressure_threshold;
  const auto dust = spawnDust(g, surface, cfg, 0.01, 1, 0, 0);
  EXPECT_GT(dust.size(), 0u);
  EXPECT_EQ(spawnDust(g, surface, cfg, 0.01, 1, 0, 0).size(), dust.size());
  cfg.rate = 0.0;
  EXPECT_TRUE(spawnDust(g, surface, cfg, 0.01, 1, 0, 0).empty());
}

TEST(Refraction, GladstoneIndex) {
  EXPECT_NEAR(refractiveIndex(1.2, 2.26e-4), 1.0002712, 1e-12);
  EXPECT_NEAR(refractiveIndex(1.2, 2.26e-4, 10.0), 1.002712, 1e-12);
}

TEST(Refraction, SnellAngle) {
  const double inc = 30.0 * kPi / 180.0;
  const Vec3 d(std::cos(inc), std::sin(inc), 0.0);
  bool reflected = true;
  const Vec3 out = snellRefract(d, Vec3(-1.0, 0.0, 0.0), 1.0, 1.1, &reflected);
  EXPECT_FALSE(reflected);
  EXPECT_NEAR(out.norm(), 1.0, 1e-12);
  const double angle = std::atan2(out.y(), out.x()) * 180.0 / kPi;
  EXPECT_NEAR(angle, std::asin(0.5 / 1.1) * 180.0 / kPi, 1e-9);
  EXPECT_NEAR(angle, 27.04, 0.01);
  const Vec3 back = snellRefract(-out, Vec3(1.0, 0.0, 0.0), 1.1, 1.0);
  EXPECT_LT((back + d).norm(), 1e-9);
}

TEST(Refraction, TotalInternalReflection) {
  const Vec3 d = Vec3(1.0, 2.0, 0.0).normalized();
  bool reflected = false;
  const Vec3 out = snellRefract(d, Vec3(1.0, 0.0, 0.0), 1.5, 1.0, &reflected);
  EXPECT_TRUE(reflected);
  EXPECT_NEAR(out.x(), -d.x(), 1e-12);
  EXPECT_NEAR(out.y(), d.y(), 1e-12);
}

ScalarVolume slabVolume(double k) {
  ScalarVolume slab;
  slab.dims = {40, 40, 4};
  slab.h = 0.5;
  slab.values.assign(slab.dims.count(), 0.0);
  for (int z = 0; z < 4; ++z)
    for (int y = 0; y < 40; ++y)
      for (int x = 20; x < 40; ++x) slab.values[slab.dims.index(x, y, z)] = 0.1 / k;
  return slab;
}

TEST(Refraction, UniformVolumeIsStraight) {
  ScalarVolume v;
  v.dims = {10, 10, 10};
  v.values.assign(v.dims.count(), 1.2);
  RefractionConfig cfg;
  cfg.exaggeration = 100.0;
  const Vec3 d = Vec3(1.0, 0.5, 0.25).normalized();
  const RayPath p = refractRay(v, Ray{Vec3(-1.0, 2.0, 3.0), d}, cfg);
  EXPECT_EQ(p.direction, d);
  EXPECT_EQ(p.bends, 0u);
}

TEST(Refraction, SlabBendsAndStaysUnit) {
  const double k = 2.26e-4;
  RefractionConfig cfg;
  cfg.k_gladstone = k;
  cfg.record_path = true;
  const double inc = 30.0 * kPi / 180.0;
  const RayPath p = refractRay(slabVolume(k), Ray{Vec3(0.0, 2.0, 1.0), Vec3(std::cos(inc), std::sin(inc), 0.0)}, cfg);
  EXPECT_GE(p.bends, 1u);
  EXPECT_NEAR(p.direction.norm(), 1.0, 1e-12);
  const double angle = std::atan2(std::hypot(p.direction.y(), p.direction.z()), p.direction.x()) * 180.0 / kPi;
  EXPECT_NEAR(angle, std::asin(std::sin(inc) / 1.1) * 180.0 / kPi, 0.1);
  EXPECT_FALSE(p.points.empty());
}

TEST(Refraction, BoxIntersection) {
  const auto hit = intersectBox(Vec3::Zero(), Vec3::Ones(), Ray{Vec3(-1.0, 0.5, 0.5), Vec3::UnitX()});
  ASSERT_TRUE(hit.has_value());
  EXPECT_DOUBLE_EQ(hit->first, 1.0);
  EXPECT_DOUBLE_EQ(hit->second, 2.0);
  EXPECT_FALSE(intersectBox(Vec3::Zero(), Vec3::Ones(), Ray{Vec3(-1.0, 2.0, 0.5), Vec3::UnitX()}).has_value());
}

// Pixel centres sit on integer coordinates; odd sizes put the optical axis on a pixel.
Camera testCamera() {
  Camera cam;
  cam.position = Vec3(0.0, -10.0, 0.0);
  cam.look_at = Vec3::Zero();
  cam.width = 65;
  cam.height = 49;
  return cam;
}

TEST(Camera, ProjectsLookAtToCentre) {
  const Camera cam = testCamera();
  const auto pr = cam.project(Vec3::Zero());
  ASSERT_TRUE(pr.has_value());
  EXPECT_NEAR(pr->x, 32.0, 1e-9);
  EXPECT_NEAR(pr->y, 24.0, 1e-9);
  EXPECT_NEAR(pr->depth, 10.0, 1e-12);
  EXPECT_FALSE(cam.project(Vec3(0.0, -20.0, 0.0)).has_value());
  const Ray r = cam.pixelRay(pr->x, pr->y);
  EXPECT_LT((r.direction - Vec3::UnitY()).norm(), 1e-12);
  const auto above = cam.project(Vec3(0.0, 0.0, 1.0));
  ASSERT_TRUE(above.has_value());
  EXPECT_LT(above->y, 24.0);
}

TEST(Splat, EmptyKeepsBackground) {
  const RgbaImage bg(8, 6, {0.2, 0.3, 0.4, 1.0});
  const RgbaImage out = splatParticles({}, testCamera(), bg);
  for (std::size_t i = 0; i < bg.pixels.size(); ++i) {
    EXPECT_EQ(out.pixels[i].r, bg.pixels[i].r);
    EXPECT_EQ(out.pixels[i].b, bg.pixels[i].b);
  }
}

TEST(Splat, OpaqueBlobPeaksAtCentre) {
  const Camera cam = testCamera();
  const RgbaImage bg(cam.width, cam.height, {0.0, 0.0, 0.0, 1.0});
  const SplatParticle p{Vec3::Zero(), {1.0, 1.0, 1.0, 1.0}, 0.3};
  const RgbaImage out = splatParticles(std::span<const SplatParticle>(&p, 1), cam, bg);
  EXPECT_NEAR(out.at(32, 24).r, 1.0, 1e-12);
  for (int d = 1; d < 10; ++d) {
    EXPECT_LE(out.at(32 + d, 24).r, out.at(32 + d - 1, 24).r);
    EXPECT_LE(out.at(32, 24 + d).r, out.at(32, 24 + d - 1).r);
  }
  EXPECT_LT(out.at(40, 24).r, 0.5);
}

}  // namespace
}  // namespace blastvox
