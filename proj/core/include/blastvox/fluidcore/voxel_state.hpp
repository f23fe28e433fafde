#pragma once

#include <cstdint>

#include "blastvox/fluidcore/constants.hpp"

namespace blastvox {

enum class CellFlag : std::uint8_t {
  interior = 0,
  free_boundary = 1,
  hard_boundary = 2,
  pruned = 3,
};

/// Fluid state of one voxel. All quantities are constant across the voxel.
/// `rho` is the density of the open (non-solid) part; the voxel holds
/// rho * partial_volume * h^3 kilograms.
struct VoxelState {
  double rho = 0.0;
  Vec3 v = Vec3::Zero();
  double N = 0.0;  // internal energy per unit mass
  double T = 0.0;
  double P = 0.0;
  double partial_volume = 1.0;
  CellFlag flag = CellFlag::interior;

  /// Total energy per unit mass, E = N + |v|^2 / 2.
  double totalEnergy() const { return N + 0.5 * v.squaredNorm(); }
  /// Inverse of totalEnergy: the internal energy implied by E and v.
  double internalFromTotal(double E) const { return E - 0.5 * v.squaredNorm(); }
};

/// T = N / c_v, P = rho R T. Idempotent.
VoxelState syncStateEquations(VoxelState cell, const PhysicalConstants& consts);

inline void syncInPlace(VoxelState& cell, const PhysicalConstants& consts) {
  cell.T = cell.N / consts.c_v;
  cell.P = cell.rho * consts.R * cell.T;
}

/// Quiescent cell at the given pressure and temperature.
VoxelState stateFromPT(double P, double T, const PhysicalConstants& consts);

/// Adiabatic sound speed sqrt(gamma P / rho); zero for vacuum.
double soundSpeed(const VoxelState& cell, const PhysicalConstants& consts);

}  // namespace blastvox
