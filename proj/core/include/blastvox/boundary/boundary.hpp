#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "blastvox/fluidcore/fluid_grid.hpp"

namespace blastvox {

enum class FaceType : std::uint8_t { free, hard };

/// Outer faces in the order x_min, x_max, y_min, y_max, z_min, z_max.
/// `faceSlot(axis, dir)` maps an axis and a +-1 direction onto this order.
inline constexpr int faceSlot(int axis, int dir) { return 2 * axis + (dir > 0 ? 1 : 0); }
const char* faceName(int slot);

struct BoundarySpec {
  std::array<FaceType, 6> outer_faces{FaceType::free, FaceType::free, FaceType::free,
                                      FaceType::free, FaceType::free, FaceType::free};
  double prune_threshold = 10.0;   // Pa
  double prune_velocity = 1.0e-3;  // m/s
  bool prune_enabled = false;

  static BoundarySpec allHard();
  static BoundarySpec allFree();
  /// Throws ConfigError on negative thresholds.
  void validate() const;
};

/// How a stencil read across one face resolves.
enum class NeighborKind : std::uint8_t {
  fluid,    // an in-domain voxel with open volume
  mirror,   // hard face or solid voxel: reflect the centre cell
  ambient,  // free outer face: quiescent ambient air
};

struct Neighbor {
  NeighborKind kind = NeighborKind::fluid;
  std::size_t index = 0;
};

/// Stencil-read resolver for a fixed grid shape and boundary specification.
class BoundaryRules {
 public:
  BoundaryRules(const GridDims& dims, const BoundarySpec& spec) : dims_(dims), spec_(spec) {}

  Neighbor neighbor(std::span<const VoxelState> cells, std::size_t idx, const Index3& c, int axis,
                    int dir) const {
    const int n = c[axis] + dir;
    if (n < 0 || n >= dims_[axis]) {
      return {spec_.outer_faces[faceSlot(axis, dir)] == FaceType::hard ? NeighborKind::mirror
                                                                          : NeighborKind::ambient,
              idx};
    }
    const std::size_t j = dir > 0 ? idx + dims_.stride(axis) : idx - dims_.stride(axis);
    if (cells[j].partial_volume <= 0.0) return {NeighborKind::mirror, idx};
    return {NeighborKind::fluid, j};
  }

  const GridDims& dims() const { return dims_; }
  const BoundarySpec& spec() const { return spec_; }

 private:
  GridDims dims_;
  BoundarySpec spec_;
};

/// State seen when the stencil of `idx` reads across the face towards
/// `axis`/`dir`. Free outer faces read as ambient air; hard faces and solid
/// voxels mirror the cell with its normal velocity negated.
VoxelState ghostValue(const FluidGrid& grid, std::size_t idx, int axis, int dir,
                      const BoundarySpec& spec, const PhysicalConstants& consts);

/// Voxels updated by the integrator this step. `mask[i]` is 1 for active
/// voxels; `cells` lists the same voxels in increasing index order.
struct ActiveSet {
  std::vector<std::uint32_t> cells;
  std::vector<std::uint8_t> mask;

  bool contains(std::size_t idx) const { return idx < mask.size() && mask[idx] != 0; }
  std::size_t size() const { return cells.size(); }
};

/// Every voxel with open volume is active.
ActiveSet fullActiveSet(const FluidGrid& grid);

/// Pruning rule: a fluid voxel is pruned iff every face-neighbour pressure
/// difference is below `prune_threshold` and |v| is below `prune_velocity`.
/// Voxels flagged in `forced` (may be empty) are always active. With pruning
/// disabled this returns `fullActiveSet`.
ActiveSet updateActiveSet(const FluidGrid& grid, const BoundarySpec& spec,
                          std::span<const std::uint8_t> forced = {});

/// Sets each fluid voxel's flag the way a step leaves it: active voxels next
/// to a free face are free_boundary, other active ones interior, inactive ones
/// pruned (or interior with pruning off). Solid voxels are left alone.
void classifyCells(FluidGrid& grid, const BoundarySpec& spec, const ActiveSet& active);

/// Marks voxels within `radius` (Chebyshev) of any voxel set in `seed`.
std::vector<std::uint8_t> dilateMask(const GridDims& dims, std::span<const std::uint8_t> seed,
                                     int radius);

}  // namespace blastvox
