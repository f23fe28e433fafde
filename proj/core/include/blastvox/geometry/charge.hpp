#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "blastvox/fluidcore/fluid_grid.hpp"
#include "blastvox/geometry/mesh.hpp"
#include "blastvox/geometry/voxelize.hpp"

namespace blastvox {

enum class TriggerKind : std::uint8_t { immediate, at_time, temperature_threshold };

struct Trigger {
  TriggerKind kind = TriggerKind::immediate;
  double time = 0.0;         // s, for at_time
  double temperature = 0.0;  // K, for temperature_threshold
};

struct Charge {
  std::string name;
  TriangleMesh mesh;
  double P0 = 1000.0 * kAtmosphere;
  double T0 = 2900.0;
  Trigger trigger;

  /// Throws ConfigError unless P0 > ambient_P and T0 > 0.
  void validate(double ambient_P) const;
};

/// Voxels whose occupancy by `mesh` exceeds one half, in index order.
std::vector<std::uint32_t> chargeCells(const TriangleMesh& mesh, const GridSpec& grid, int samples = 4);

/// Voxels within one face step of `cells` but not in it: where a
/// temperature trigger looks for an approaching flame front.
std::vector<std::uint32_t> chargeShell(const GridDims& dims, std::span<const std::uint32_t> cells);

struct IgnitionReport {
  std::size_t ignited = 0;
  std::size_t skipped_solid = 0;  // charge voxels fully occupied by a solid
};

/// Sets P0 and T0 on the listed voxels (density and internal energy from the
/// state equations; velocity untouched). Solid voxels are skipped and
/// counted.
IgnitionReport igniteCharge(FluidGrid& grid, std::span<const std::uint32_t> cells, double P0, double T0,
                            const PhysicalConstants& consts);

/// Trigger predicate. `watch` is the charge region plus its shell; a
/// temperature trigger fires once any watched voxel exceeds the threshold.
bool triggerSatisfied(const Trigger& trigger, const FluidGrid& grid, double time,
                      std::span<const std::uint32_t> watch);

}  // namespace blastvox
