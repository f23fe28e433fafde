#include "blastvox/effects/tracers.hpp"

#include <random>

#include "blastvox/coupling/sampling.hpp"
#include "blastvox/errors.hpp"
#include "blastvox/fluidcore/parallel.hpp"
#include "blastvox/geometry/inside_test.hpp"

namespace blastvox {

std::vector<TracerParticle> seedTracers(const TriangleMesh& mesh, std::size_t count, std::uint64_t seed) {
  std::vector<TracerParticle> out(count);
  if (count == 0) return out;
  mesh.validateManifold();
  if (!(mesh.signedVolume() > 0.0)) throw ConfigError("tracer seed mesh encloses no volume");
  const InsideTester tester(mesh);
  const Aabb box = mesh.bounds();
  parallel::forRange(0, count, [&](std::size_t i) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vec3 p;
    do {
      for (int a = 0; a < 3; ++a) p[a] = box.lo[a] + u(rng) * (box.hi[a] - box.lo[a]);
    } while (!tester.inside(p));
    out[i].id = i;
    out[i].position = p;
  }, 64);
  return out;
}

bool clampToGrid(const FluidGrid& grid, Vec3& p) {
  const Vec3 lo = grid.origin();
  const Vec3 hi = grid.extentMax();
  const Vec3 q = p.cwiseMax(lo).cwiseMin(hi);
  const bool inside = q == p;
  p = q;
  return inside;
}

void advectTracer(TracerParticle& p, const FluidGrid& grid, double dt, const BlackbodyConfig& colors) {
  if (!p.frozen) {
    const FluidSample s = sampleFluid(grid, p.position);
    p.position += s.v * dt;
    if (!clampToGrid(grid, p.position)) p.frozen = true;
  }
  p.temperature = std::max(0.0, sampleFluid(grid, p.position).T);
  p.color = blackbodyColor(p.temperature, colors);
}

void advectTracers(std::span<TracerParticle> particles, const FluidGrid& grid, double dt,
                   const BlackbodyConfig& colors) {
  parallel::forRange(0, particles.size(), [&](std::size_t i) { advectTracer(particles[i], grid, dt, colors); }, 128);
}

}  // namespace blastvox
