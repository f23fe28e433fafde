#include "blastvox/effects/dust.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "blastvox/coupling/sampling.hpp"
#include "blastvox/effects/tracers.hpp"
#include "blastvox/fluidcore/parallel.hpp"

namespace blastvox {

double dustRelaxationTime(double diameter, double density, double mu) {
  return density * diameter * diameter / (18.0 * mu);
}

double dustDiffusivity(double T, double mu, double diameter) {
  return kBoltzmann * T / (3.0 * std::numbers::pi * mu * diameter);
}

void advectDust(DustMetaParticle& p, const FluidGrid& grid, double dt, const PhysicalConstants& consts,
                const DustConfig& config) {
  if (p.frozen) return;
  const FluidSample s = sampleFluid(grid, p.center, true);
  const Vec3 u = s.fluid_weight > 0.0 ? s.v : Vec3::Zero();
  const double tau = dustRelaxationTime(p.diameter, config.density, consts.mu);
  const Vec3 terminal = u + tau * consts.g;
  const double decay = std::exp(-dt / tau);
  const Vec3 offset = p.velocity - terminal;
  p.center += terminal * dt - tau * std::expm1(-dt / tau) * offset;
  p.velocity = terminal + offset * decay;
  p.variance += 2.0 * dustDiffusivity(std::max(0.0, s.T), consts.mu, p.diameter) * dt;
  if (!clampToGrid(grid, p.center)) {
    p.frozen = true;
    p.velocity = Vec3::Zero();
  }
}

void advectDust(std::span<DustMetaParticle> particles, const FluidGrid& grid, double dt,
                const PhysicalConstants& consts, const DustConfig& config) {
  parallel::forRange(0, particles.size(), [&](std::size_t i) { advectDust(particles[i], grid, dt, consts, config); },
                     128);
}

std::vector<std::uint32_t> dustSurfaceCells(const FluidGrid& grid, const std::array<bool, 6>& hard_faces) {
  const GridDims& d = grid.dims();
  const auto cells = grid.current();
  std::vector<std::uint32_t> out;
  for (std::size_t idx = 0; idx < cells.size(); ++idx) {
    if (cells[idx].partial_volume <= 0.0) continue;
    const Index3 c = d.coord(idx);
    bool surface = false;
    for (int axis = 0; axis < 3 && !surface; ++axis) {
      for (int dir = -1; dir <= 1 && !surface; dir += 2) {
        const int n = c[axis] + dir;
        if (n < 0 || n >= d[axis]) {
          surface = hard_faces[2 * axis + (dir > 0)];
        } else {
          const std::size_t j = dir > 0 ? idx + d.stride(axis) : idx - d.stride(axis);
          surface = cells[j].partial_volume <= 0.0;
        }
      }
    }
    if (surface) out.push_back(static_cast<std::uint32_t>(idx));
  }
  return out;
}

std::vector<DustMetaParticle> spawnDust(const FluidGrid& grid, std::span<const std::uint32_t> surface,
                                        const DustConfig& config, double dt, std::uint64_t seed,
                                        std::uint64_t step, std::uint64_t next_id) {
  std::vector<DustMetaParticle> out;
  if (!(config.rate > 0.0)) return out;
  const double h = grid.h();
  const double expected = config.rate * h * h * dt;
  for (const auto idx : surface) {
    const VoxelState& c = grid.at(idx);
    if (c.P - grid.ambientP() <= config.overpressure_threshold) continue;
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32), idx};
    std::mt19937_64 rng(seq);
    std::poisson_distribution<int> count(expected);
    std::lognormal_distribution<double> size(std::log(config.median_diameter), config.sigma_log);
    std::uniform_real_distribution<double> jitter(-0.5, 0.5);
    const int n = count(rng);
    const Vec3 center = grid.center(idx);
    for (int k = 0; k < n; ++k) {
      DustMetaParticle p;
      p.id = next_id++;
      p.center = center + h * Vec3(jitter(rng), jitter(rng), jitter(rng));
      p.velocity = c.v;
      p.diameter = size(rng);
      p.weight = config.weight;
      p.variance = config.initial_variance;
      out.push_back(p);
    }
  }
  return out;
}

}  // namespace blastvox
