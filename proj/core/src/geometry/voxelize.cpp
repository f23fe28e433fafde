#include "blastvox/geometry/voxelize.hpp"

#include <algorithm>
#include <cmath>

#include "blastvox/errors.hpp"
#include "blastvox/fluidcore/parallel.hpp"
#include "blastvox/geometry/inside_test.hpp"

namespace blastvox {

std::vector<double> solidOccupancy(std::span<const TriangleMesh* const> meshes, const GridSpec& grid,
                                   int samples) {
  if (samples < 1) throw ConfigError("voxelization needs at least one sample per axis");
  const GridDims& d = grid.dims;
  std::vector<double> occ(d.count(), 0.0);
  if (meshes.empty()) return occ;

  std::vector<InsideTester> testers;
  testers.reserve(meshes.size());
  for (const TriangleMesh* m : meshes) testers.emplace_back(*m, 64);

  const int s = samples;
  const double inv = 1.0 / (double(s) * s * s);
  const auto sub = [&](int cell, int k, int axis) {
    return grid.origin[axis] + (cell + (k + 0.5) / s) * grid.h;
  };

  // One task per voxel column: collect crossings for each sample column,
  // then count inside samples bottom to top.
  parallel::forRange(0, static_cast<std::size_t>(d.nx) * d.ny, [&](std::size_t col) {
    const int i = static_cast<int>(col % d.nx);
    const int j = static_cast<int>(col / d.nx);
    std::vector<int> counts(d.nz, 0);
    std::vector<double> crossings;
    for (const InsideTester& tester : testers) {
      const Aabb& b = tester.bounds();
      if (b.empty()) continue;
      for (int sy = 0; sy < s; ++sy) {
        const double y = sub(j, sy, 1);
        if (y < b.lo.y() || y > b.hi.y()) continue;
        for (int sx = 0; sx < s; ++sx) {
          const double x = sub(i, sx, 0);
          if (x < b.lo.x() || x > b.hi.x()) continue;
          tester.columnCrossings(x, y, crossings);
          if (crossings.empty()) continue;
          for (int k = 0; k < d.nz; ++k) {
            for (int sz = 0; sz < s; ++sz) {
              if (insideFromCrossings(crossings, sub(k, sz, 2))) ++counts[k];
            }
          }
        }
      }
    }
    for (int k = 0; k < d.nz; ++k) {
      occ[d.index(i, j, k)] = std::min(1.0, counts[k] * inv);
    }
  }, 1);

  if (meshes.size() > 1) {
    // Overlapping meshes would be counted twice above; recount sample by
    // sample where any two bounding boxes overlap.
    bool overlap = false;
    for (std::size_t a = 0; a < testers.size() && !overlap; ++a) {
      for (std::size_t b = a + 1; b < testers.size() && !overlap; ++b) {
        const Aabb& A = testers[a].bounds();
        const Aabb& B = testers[b].bounds();
        overlap = !((A.hi.array() < B.lo.array()).any() || (B.hi.array() < A.lo.array()).any());
      }
    }
    if (overlap) {
      parallel::forRange(0, d.count(), [&](std::size_t idx) {
        if (occ[idx] == 0.0) return;
        const Index3 c = d.coord(idx);
        int count = 0;
        for (int sz = 0; sz < s; ++sz)
          for (int sy = 0; sy < s; ++sy)
            for (int sx = 0; sx < s; ++sx) {
              const Vec3 p(sub(c.i, sx, 0), sub(c.j, sy, 1), sub(c.k, sz, 2));
              for (const InsideTester& t : testers) {
                if (t.inside(p)) {
                  ++count;
                  break;
                }
              }
            }
        occ[idx] = count * inv;
      }, 64);
    }
  }
  return occ;
}

std::vector<double> solidOccupancy(const TriangleMesh& mesh, const GridSpec& grid, int samples) {
  const TriangleMesh* list[] = {&mesh};
  return solidOccupancy(std::span<const TriangleMesh* const>(list), grid, samples);
}

std::vector<double> voxelize(std::span<const TriangleMesh* const> meshes, const GridSpec& grid,
                             const VoxelizeOptions& options) {
  for (const TriangleMesh* m : meshes) m->validateManifold();
  std::vector<double> free = solidOccupancy(meshes, grid, options.samples);
  for (double& f : free) {
    f = 1.0 - f;
    if (f < options.zero_threshold) f = 0.0;
  }
  return free;
}

std::vector<double> voxelize(const TriangleMesh& mesh, const GridSpec& grid, const VoxelizeOptions& options) {
  const TriangleMesh* list[] = {&mesh};
  return voxelize(std::span<const TriangleMesh* const>(list), grid, options);
}

double occupiedVolume(std::span<const double> free_fraction, double h) {
  double solid = 0.0;
  for (const double f : free_fraction) solid += 1.0 - f;
  return solid * h * h * h;
}

}  // namespace blastvox
