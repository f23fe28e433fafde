#include "blastvox/boundary/boundary.hpp"

#include <cmath>

#include "blastvox/errors.hpp"
#include "blastvox/fluidcore/parallel.hpp"

namespace blastvox {

const char* faceName(int slot) {
  static constexpr const char* names[6] = {"x_min", "x_max", "y_min", "y_max", "z_min", "z_max"};
  return slot >= 0 && slot < 6 ? names[slot] : "?";
}

BoundarySpec BoundarySpec::allHard() {
  BoundarySpec s;
  s.outer_faces.fill(FaceType::hard);
  return s;
}

BoundarySpec BoundarySpec::allFree() { return BoundarySpec{}; }

void BoundarySpec::validate() const {
  if (!(prune_threshold >= 0.0)) throw ConfigError("prune_threshold must be >= 0");
  if (!(prune_velocity >= 0.0)) throw ConfigError("prune velocity threshold must be >= 0");
}

VoxelState ghostValue(const FluidGrid& grid, std::size_t idx, int axis, int dir,
                      const BoundarySpec& spec, const PhysicalConstants& consts) {
  const BoundaryRules rules(grid.dims(), spec);
  const auto cells = grid.current();
  const Neighbor n = rules.neighbor(cells, idx, grid.dims().coord(idx), axis, dir);
  switch (n.kind) {
    case NeighborKind::fluid:
      return cells[n.index];
    case NeighborKind::mirror: {
      VoxelState g = cells[idx];
      g.v[axis] = -g.v[axis];
      return g;
    }
    case NeighborKind::ambient:
      break;
  }
  VoxelState a = grid.ambientState(consts);
  a.P = grid.ambientP();
  a.T = grid.ambientT();
  return a;
}

ActiveSet fullActiveSet(const FluidGrid& grid) {
  ActiveSet set;
  const auto cells = grid.current();
  set.mask.assign(cells.size(), 0);
  set.cells.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].partial_volume > 0.0) {
      set.mask[i] = 1;
      set.cells.push_back(static_cast<std::uint32_t>(i));
    }
  }
  return set;
}

ActiveSet updateActiveSet(const FluidGrid& grid, const BoundarySpec& spec,
                          std::span<const std::uint8_t> forced) {
  if (!spec.prune_enabled) return fullActiveSet(grid);
  const auto cells = grid.current();
  const GridDims& dims = grid.dims();
  const BoundaryRules rules(dims, spec);
  const double ambientP = grid.ambientP();
  ActiveSet set;
  set.mask.assign(cells.size(), 0);
  parallel::forRange(0, cells.size(), [&](std::size_t idx) {
    const VoxelState& c = cells[idx];
    if (c.partial_volume <= 0.0) return;
    if (!forced.empty() && forced[idx] != 0) {
      set.mask[idx] = 1;
      return;
    }
    // hypot, unlike a squared norm, does not underflow for tiny velocities
    if (!(std::hypot(c.v.x(), c.v.y(), c.v.z()) < spec.prune_velocity)) {
      set.mask[idx] = 1;
      return;
    }
    const Index3 ijk = dims.coord(idx);
    for (int axis = 0; axis < 3; ++axis) {
      for (int dir = -1; dir <= 1; dir += 2) {
        const Neighbor n = rules.neighbor(cells, idx, ijk, axis, dir);
        double other = c.P;
        if (n.kind == NeighborKind::fluid) other = cells[n.index].P;
        else if (n.kind == NeighborKind::ambient) other = ambientP;
        if (!(std::abs(c.P - other) < spec.prune_threshold)) {
          set.mask[idx] = 1;
          return;
        }
      }
    }
  }, 1024);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (set.mask[i]) set.cells.push_back(static_cast<std::uint32_t>(i));
  }
  return set;
}

void classifyCells(FluidGrid& grid, const BoundarySpec& spec, const ActiveSet& active) {
  const GridDims& dims = grid.dims();
  const BoundaryRules rules(dims, spec);
  auto cells = grid.current();
  parallel::forRange(0, cells.size(), [&](std::size_t idx) {
    VoxelState& c = cells[idx];
    if (c.partial_volume <= 0.0) return;
    if (!active.mask[idx]) {
      c.flag = spec.prune_enabled ? CellFlag::pruned : CellFlag::interior;
      return;
    }
    const Index3 ijk = dims.coord(idx);
    bool free_face = false;
    for (int axis = 0; axis < 3 && !free_face; ++axis) {
      for (int dir = -1; dir <= 1; dir += 2) {
        if (rules.neighbor(cells, idx, ijk, axis, dir).kind == NeighborKind::ambient) free_face = true;
      }
    }
    c.flag = free_face ? CellFlag::free_boundary : CellFlag::interior;
  }, 4096);
}

std::vector<std::uint8_t> dilateMask(const GridDims& dims, std::span<const std::uint8_t> seed,
                                     int radius) {
  // Chebyshev dilation is separable: a 1D max filter along each axis.
  std::vector<std::uint8_t> a(seed.begin(), seed.end());
  std::vector<std::uint8_t> b(a.size(), 0);
  for (int axis = 0; axis < 3; ++axis) {
    const std::size_t stride = dims.stride(axis);
    parallel::forRange(0, dims.count(), [&](std::size_t idx) {
      const int c = dims.coord(idx)[axis];
      std::uint8_t v = 0;
      for (int d = -radius; d <= radius && !v; ++d) {
        const int n = c + d;
        if (n < 0 || n >= dims[axis]) continue;
        const std::size_t j = d >= 0 ? idx + stride * static_cast<std::size_t>(d)
                                     : idx - stride * static_cast<std::size_t>(-d);
        v = a[j];
      }
      b[idx] = v ? 1 : 0;
    }, 4096);
    a.swap(b);
  }
  return a;
}

}  // namespace blastvox
