#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "blastvox/fluidcore/fluid_grid.hpp"

namespace blastvox {

/// A Gaussian blob of identical spherical dust grains.
struct DustMetaParticle {
  std::uint64_t id = 0;
  Vec3 center = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  double variance = 0.0;  // m^2
  double diameter = 10e-6;
  double weight = 1.0;    // grains represented
  bool frozen = false;
};

struct DustConfig {
  double rate = 0.0;                     // metaparticles per m^2 of swept surface per second
  double overpressure_threshold = 5.0e3; // Pa
  double median_diameter = 10e-6;        // m
  double sigma_log = 0.7;                // of the natural-log diameter
  double density = 2600.0;               // kg/m^3 of a grain
  double weight = 1.0e6;                 // grains per metaparticle
  double initial_variance = 0.0;         // m^2
};

/// Stokes relaxation time rho_dust d^2 / (18 mu).
double dustRelaxationTime(double diameter, double density, double mu);
/// Stokes-Einstein diffusivity k_B T / (3 pi mu d).
double dustDiffusivity(double T, double mu, double diameter);

/// One drag step toward the local fluid velocity plus gravity, integrated
/// exactly for a frozen fluid velocity over dt, and Brownian spreading of
/// the variance by 2 D dt. Particles leaving the grid freeze at the wall.
void advectDust(DustMetaParticle& p, const FluidGrid& grid, double dt, const PhysicalConstants& consts,
                const DustConfig& config);
void advectDust(std::span<DustMetaParticle> particles, const FluidGrid& grid, double dt,
                const PhysicalConstants& consts, const DustConfig& config);

/// Fluid voxels with a hard face or solid neighbour: where dust can be
/// lifted.
std::vector<std::uint32_t> dustSurfaceCells(const FluidGrid& grid, const std::array<bool, 6>& hard_faces);

/// New metaparticles over `surface` cells whose overpressure exceeds the
/// threshold. The expected count per cell is rate h^2 dt; draws use a
/// generator keyed by (seed, step, voxel) and ids start at `next_id`.
std::vector<DustMetaParticle> spawnDust(const FluidGrid& grid, std::span<const std::uint32_t> surface,
                                        const DustConfig& config, double dt, std::uint64_t seed,
                                        std::uint64_t step, std::uint64_t next_id);

}  // namespace blastvox
