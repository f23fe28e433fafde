#pragma once

#include <array>
#include <cmath>
#include <span>

#include "blastvox/fluidcore/fluid_grid.hpp"

namespace blastvox {

/// The eight voxel centres surrounding a point, with fractional offsets.
/// Points outside the lattice of centres are clamped onto it.
struct TrilinearStencil {
  std::array<std::size_t, 8> index{};  // corner c at bit pattern (x, y, z) = (c & 1, c >> 1 & 1, c >> 2)
  Vec3 t = Vec3::Zero();               // offsets in [0, 1] along each axis
};

TrilinearStencil trilinearStencil(const GridDims& dims, double h, const Vec3& origin, const Vec3& p);

inline double lerp1(double a, double b, double t) { return a + t * (b - a); }
inline Vec3 lerp1(const Vec3& a, const Vec3& b, double t) { return a + t * (b - a); }

/// Nested linear interpolation of `field(index)`. Written in a + t (b - a)
/// form so constant fields are reproduced exactly.
template <class Field>
auto trilinear(const TrilinearStencil& s, Field&& field) {
  const auto& i = s.index;
  const auto x00 = lerp1(field(i[0]), field(i[1]), s.t.x());
  const auto x10 = lerp1(field(i[2]), field(i[3]), s.t.x());
  const auto x01 = lerp1(field(i[4]), field(i[5]), s.t.x());
  const auto x11 = lerp1(field(i[6]), field(i[7]), s.t.x());
  const auto y0 = lerp1(x00, x10, s.t.y());
  const auto y1 = lerp1(x01, x11, s.t.y());
  return lerp1(y0, y1, s.t.z());
}

struct FluidSample {
  double rho = 0.0;
  double P = 0.0;
  double T = 0.0;
  Vec3 v = Vec3::Zero();
  double fluid_weight = 0.0;  // trilinear weight carried by open corners
};

/// Trilinear sample of the fluid state at a world point. With
/// `fluid_only`, corners with no open volume are dropped and the remaining
/// weights renormalised; a sample with no open corner has fluid_weight 0.
FluidSample sampleFluid(const FluidGrid& grid, const Vec3& p, bool fluid_only = false);

/// Trilinear sample of an arbitrary per-voxel scalar field.
double sampleScalar(const GridDims& dims, double h, const Vec3& origin, std::span<const double> field,
                    const Vec3& p);

}  // namespace blastvox
