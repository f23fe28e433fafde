#pragma once

#include <span>
#include <vector>

#include "blastvox/geometry/mesh.hpp"

namespace blastvox {

/// Placement of a voxel lattice in world space.
struct GridSpec {
  GridDims dims;
  double h = 1.0;
  Vec3 origin = Vec3::Zero();

  Vec3 extentMax() const {
    return origin + h * Vec3(dims.nx, dims.ny, dims.nz);
  }
};

struct VoxelizeOptions {
  int samples = 4;              // per axis, per voxel
  double zero_threshold = 0.1;  // free fractions below this become 0
};

/// Fraction of each voxel's sample points lying inside any of `meshes`,
/// in [0, 1]. Samples sit at the centres of an s x s x s sub-lattice.
std::vector<double> solidOccupancy(std::span<const TriangleMesh* const> meshes, const GridSpec& grid,
                                   int samples);
std::vector<double> solidOccupancy(const TriangleMesh& mesh, const GridSpec& grid, int samples);

/// Free (non-solid) fraction per voxel, 1 meaning fully outside every
/// solid. Fractions below the zero threshold are set to 0. Each mesh must
/// be a closed manifold; otherwise ConfigError names the offending edge.
std::vector<double> voxelize(std::span<const TriangleMesh* const> meshes, const GridSpec& grid,
                             const VoxelizeOptions& options = {});
std::vector<double> voxelize(const TriangleMesh& mesh, const GridSpec& grid, const VoxelizeOptions& options = {});

/// Sum of (1 - free) h^3: the solid volume seen by the fluid.
double occupiedVolume(std::span<const double> free_fraction, double h);

}  // namespace blastvox
