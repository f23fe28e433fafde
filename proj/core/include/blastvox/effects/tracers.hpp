#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "blastvox/effects/blackbody.hpp"
#include "blastvox/fluidcore/fluid_grid.hpp"
#include "blastvox/geometry/mesh.hpp"

namespace blastvox {

/// Massless fireball marker.
struct TracerParticle {
  std::uint64_t id = 0;
  Vec3 position = Vec3::Zero();
  double temperature = 0.0;
  Rgba color;
  bool frozen = false;  // left the grid
};

/// `count` points uniformly distributed inside a closed mesh, by rejection
/// sampling in its bounding box. Particle i uses its own generator seeded
/// from (seed, i), so results do not depend on scheduling.
std::vector<TracerParticle> seedTracers(const TriangleMesh& mesh, std::size_t count, std::uint64_t seed);

/// Moves the particle with the trilinearly interpolated velocity and
/// re-samples its temperature. A particle whose new position lies outside
/// the grid is clamped to the boundary and frozen.
void advectTracer(TracerParticle& p, const FluidGrid& grid, double dt, const BlackbodyConfig& colors = {});
void advectTracers(std::span<TracerParticle> particles, const FluidGrid& grid, double dt,
                   const BlackbodyConfig& colors = {});

/// Clamps p into the grid box; returns false if it had to move.
bool clampToGrid(const FluidGrid& grid, Vec3& p);

}  // namespace blastvox
