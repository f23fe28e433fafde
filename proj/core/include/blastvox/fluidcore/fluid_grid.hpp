#pragma once

#include <span>
#include <vector>

#include "blastvox/fluidcore/voxel_state.hpp"
#include "blastvox/types.hpp"

namespace blastvox {

/// Double-buffered lattice of cubical voxels with collocated (cell-centred)
/// state. Readers use `current()`; passes write into `next()` and the owner
/// calls `swapBuffers()` once per step.
class FluidGrid {
 public:
  FluidGrid() = default;
  FluidGrid(GridDims dims, double h, Vec3 origin = Vec3::Zero());

  const GridDims& dims() const { return dims_; }
  double h() const { return h_; }
  double cellVolume() const { return h_ * h_ * h_; }
  const Vec3& origin() const { return origin_; }
  std::size_t size() const { return read_.size(); }

  std::span<const VoxelState> current() const { return read_; }
  std::span<VoxelState> current() { return read_; }
  std::span<VoxelState> next() { return write_; }
  void swapBuffers() { read_.swap(write_); }
  /// Copies the read buffer into the write buffer.
  void mirrorToNext();

  const VoxelState& at(std::size_t idx) const { return read_[idx]; }
  VoxelState& at(std::size_t idx) { return read_[idx]; }
  const VoxelState& at(int i, int j, int k) const { return read_[dims_.index(i, j, k)]; }
  VoxelState& at(int i, int j, int k) { return read_[dims_.index(i, j, k)]; }

  /// World-space centre of a voxel.
  Vec3 center(const Index3& c) const;
  Vec3 center(std::size_t idx) const { return center(dims_.coord(idx)); }
  /// Upper corner of the domain box.
  Vec3 extentMax() const;

  double ambientP() const { return ambient_P_; }
  double ambientT() const { return ambient_T_; }
  void setAmbient(double P, double T) {
    ambient_P_ = P;
    ambient_T_ = T;
  }
  VoxelState ambientState(const PhysicalConstants& consts) const;

 private:
  GridDims dims_;
  double h_ = 1.0;
  Vec3 origin_ = Vec3::Zero();
  std::vector<VoxelState> read_;
  std::vector<VoxelState> write_;
  double ambient_P_ = kAtmosphere;
  double ambient_T_ = 290.0;
};

/// Fills every voxel (both buffers) with quiescent air at P and T.
/// Throws ConfigError for non-positive P or T.
void initAmbient(FluidGrid& grid, double P, double T, const PhysicalConstants& consts);

/// Sum of rho * partial_volume * h^3 with a fixed reduction order.
double totalMass(const FluidGrid& grid);
/// Sum of rho * partial_volume * h^3 * (N + |v|^2 / 2).
double totalEnergy(const FluidGrid& grid);
Vec3 totalMomentum(const FluidGrid& grid);

/// Order-independent bit pattern digest of the read buffer.
std::uint64_t checksum(const FluidGrid& grid);

}  // namespace blastvox
