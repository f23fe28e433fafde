#include "blastvox/geometry/charge.hpp"

#include <algorithm>

#include "blastvox/errors.hpp"

namespace blastvox {

void Charge::validate(double ambient_P) const {
  if (!(P0 > ambient_P)) throw ConfigError("charge '" + name + "': pressure must exceed the ambient pressure");
  if (!(T0 > 0.0)) throw ConfigError("charge '" + name + "': temperature must be positive");
}

std::vector<std::uint32_t> chargeCells(const TriangleMesh& mesh, const GridSpec& grid, int samples) {
  mesh.validateManifold();
  const std::vector<double> occ = solidOccupancy(mesh, grid, samples);
  std::vector<std::uint32_t> cells;
  for (std::size_t i = 0; i < occ.size(); ++i) {
    if (occ[i] > 0.5) cells.push_back(static_cast<std::uint32_t>(i));
  }
  return cells;
}

std::vector<std::uint32_t> chargeShell(const GridDims& dims, std::span<const std::uint32_t> cells) {
  std::vector<std::uint8_t> in(dims.count(), 0);
  for (const auto c : cells) in[c] = 1;
  std::vector<std::uint32_t> shell;
  for (const auto c : cells) {
    const Index3 p = dims.coord(c);
    for (int axis = 0; axis < 3; ++axis) {
      for (int dir = -1; dir <= 1; dir += 2) {
        Index3 q = p;
        if (axis == 0) q.i += dir;
        if (axis == 1) q.j += dir;
        if (axis == 2) q.k += dir;
        if (!dims.contains(q)) continue;
        const std::size_t n = dims.index(q);
        if (!in[n]) {
          in[n] = 2;
          shell.push_back(static_cast<std::uint32_t>(n));
        }
      }
    }
  }
  std::sort(shell.begin(), shell.end());
  return shell;
}

IgnitionReport igniteCharge(FluidGrid& grid, std::span<const std::uint32_t> cells, double P0, double T0,
                            const PhysicalConstants& consts) {
  IgnitionReport report;
  for (const auto idx : cells) {
    VoxelState& c = grid.at(idx);
    if (c.partial_volume <= 0.0) {
      ++report.skipped_solid;
      continue;
    }
    c.rho = P0 / (consts.R * T0);
    c.N = consts.c_v * T0;
    syncInPlace(c, consts);
    c.P = P0;
    c.T = T0;
    ++report.ignited;
  }
  return report;
}

bool triggerSatisfied(const Trigger& trigger, const FluidGrid& grid, double time,
                      std::span<const std::uint32_t> watch) {
  switch (trigger.kind) {
    case TriggerKind::immediate:
      return true;
    case TriggerKind::at_time:
      return time >= trigger.time;
    case TriggerKind::temperature_threshold:
      for (const auto idx : watch) {
        if (grid.at(idx).T > trigger.temperature) return true;
      }
      return false;
  }
  return false;
}

}  // namespace blastvox
