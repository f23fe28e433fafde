#include "blastvox/coupling/sampling.hpp"

#include <algorithm>

namespace blastvox {

TrilinearStencil trilinearStencil(const GridDims& dims, double h, const Vec3& origin, const Vec3& p) {
  TrilinearStencil s;
  int lo[3];
  int hi[3];
  for (int a = 0; a < 3; ++a) {
    const int n = dims[a];
    const double u = std::clamp((p[a] - origin[a]) / h - 0.5, 0.0, double(n - 1));
    int base = std::min(static_cast<int>(std::floor(u)), std::max(n - 2, 0));
    lo[a] = base;
    hi[a] = std::min(base + 1, n - 1);
    s.t[a] = n > 1 ? u - base : 0.0;
  }
  for (int c = 0; c < 8; ++c) {
    const int i = (c & 1) ? hi[0] : lo[0];
    const int j = (c & 2) ? hi[1] : lo[1];
    const int k = (c & 4) ? hi[2] : lo[2];
    s.index[c] = dims.index(i, j, k);
  }
  return s;
}

FluidSample sampleFluid(const FluidGrid& grid, const Vec3& p, bool fluid_only) {
  const TrilinearStencil s = trilinearStencil(grid.dims(), grid.h(), grid.origin(), p);
  const auto cells = grid.current();
  FluidSample out;
  bool all_open = true;
  for (const auto i : s.index) all_open = all_open && cells[i].partial_volume > 0.0;
  if (!fluid_only || all_open) {
    out.rho = trilinear(s, [&](std::size_t i) { return cells[i].rho; });
    out.P = trilinear(s, [&](std::size_t i) { return cells[i].P; });
    out.T = trilinear(s, [&](std::size_t i) { return cells[i].T; });
    out.v = trilinear(s, [&](std::size_t i) -> Vec3 { return cells[i].v; });
    out.fluid_weight = 1.0;
    return out;
  }
  double wsum = 0.0;
  for (int c = 0; c < 8; ++c) {
    const VoxelState& cell = cells[s.index[c]];
    if (cell.partial_volume <= 0.0) continue;
    const double w = ((c & 1) ? s.t.x() : 1.0 - s.t.x()) * ((c & 2) ? s.t.y() : 1.0 - s.t.y()) *
                     ((c & 4) ? s.t.z() : 1.0 - s.t.z());
    wsum += w;
    out.rho += w * cell.rho;
    out.P += w * cell.P;
    out.T += w * cell.T;
    out.v += w * cell.v;
  }
  out.fluid_weight = wsum;
  if (wsum > 0.0) {
    out.rho /= wsum;
    out.P /= wsum;
    out.T /= wsum;
    out.v /= wsum;
  }
  return out;
}

double sampleScalar(const GridDims& dims, double h, const Vec3& origin, std::span<const double> field,
                    const Vec3& p) {
  const TrilinearStencil s = trilinearStencil(dims, h, origin, p);
  return trilinear(s, [&](std::size_t i) { return field[i]; });
}

}  // namespace blastvox
