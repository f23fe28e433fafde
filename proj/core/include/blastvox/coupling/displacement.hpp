#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "blastvox/fluidcore/fluid_grid.hpp"

namespace blastvox {

/// Adiabatic volume change of one voxel's gas: rho2 = rho1 V1 / V2,
/// T2 = T1 (rho2 / rho1)^(gamma - 1), so P2 / P1 = (rho2 / rho1)^gamma.
/// The voxel's partial volume becomes V2. Requires V1 > 0 and V2 > 0.
VoxelState adiabaticCompress(const VoxelState& cell, double V1, double V2, const PhysicalConstants& consts);

/// Opening merge: voxel A (previously closed) opens to V_A2 next to B,
/// which goes from V_B1 to V_B2. Returns the remaining volume changes
/// (dV_A, dV_B) after the pair is split in proportion to the final volumes.
struct OpeningSplit {
  double initial_A = 0.0;  // V~_A1
  double initial_B = 0.0;  // V~_B1
  double delta_A = 0.0;
  double delta_B = 0.0;
};
OpeningSplit mergeVoxelZeroToNonzero(double V_A2, double V_B1, double V_B2);

/// Closing merge: A (volume V_A1) closes and its gas joins B. Mass,
/// momentum and total energy are summed, kinetic energy lost in the
/// averaging becomes internal energy. `merged` receives the combined state
/// with partial volume V_A1 + V_B1; the return value is V_B2 minus that.
double mergeVoxelNonzeroToZero(const VoxelState& A, const VoxelState& B, double V_B2, const PhysicalConstants& consts,
                               VoxelState& merged);

struct DisplacementStats {
  std::uint64_t openings = 0;
  std::uint64_t closings = 0;
  std::uint64_t orphans = 0;  // merges with no open partner in the preferred direction
  std::uint64_t drained_cells = 0;
};

/// Lagged partial volumes. The grid's partial_volume holds the internal
/// fraction; `target()` holds the latest voxelization. Changes drain at
/// piston speed along the dominant axis of the moving surface.
class DisplacementModel {
 public:
  /// Pending entry for one voxel (fraction per second; 0 = next step).
  struct Entry {
    std::uint32_t index;
    double rate;
    std::int8_t axis;
    std::int8_t direction;
  };

  DisplacementModel() = default;
  explicit DisplacementModel(const FluidGrid& grid);

  /// New instantaneous free fractions. `piston(i)` returns the velocity of
  /// the surface sweeping voxel i.
  void schedule(FluidGrid& grid, std::span<const double> free_fraction,
                const std::function<Vec3(std::size_t)>& piston, const PhysicalConstants& consts);

  /// Drains pending volume changes for one step of length dt.
  void advance(FluidGrid& grid, double dt, const PhysicalConstants& consts);

  bool idle() const { return pending_.empty(); }
  std::span<const double> target() const { return target_; }
  const std::vector<Entry>& pending() const { return pending_; }
  const DisplacementStats& stats() const { return stats_; }

  void restore(std::vector<double> target, std::vector<Entry> pending, DisplacementStats stats) {
    target_ = std::move(target);
    pending_ = std::move(pending);
    stats_ = stats;
  }

 private:
  long findPartner(const FluidGrid& grid, std::size_t idx, int axis, int direction) const;

  std::vector<double> target_;
  std::vector<Entry> pending_;
  DisplacementStats stats_;
};

}  // namespace blastvox
