#include "blastvox/fluidcore/voxel_state.hpp"

#include <cmath>

namespace blastvox {

VoxelState syncStateEquations(VoxelState cell, const PhysicalConstants& consts) {
  syncInPlace(cell, consts);
  return cell;
}

VoxelState stateFromPT(double P, double T, const PhysicalConstants& consts) {
  VoxelState s;
  s.rho = P / (consts.R * T);
  s.N = consts.c_v * T;
  s.v = Vec3::Zero();
  syncInPlace(s, consts);
  return s;
}

double soundSpeed(const VoxelState& cell, const PhysicalConstants& consts) {
  if (cell.rho <= 0.0 || cell.P <= 0.0) return 0.0;
  return std::sqrt(consts.gamma() * cell.P / cell.rho);
}

}  // namespace blastvox
