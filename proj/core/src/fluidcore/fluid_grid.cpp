#include "blastvox/fluidcore/fluid_grid.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <string>

#include "blastvox/errors.hpp"
#include "blastvox/fluidcore/parallel.hpp"

namespace blastvox {

FluidGrid::FluidGrid(GridDims dims, double h, Vec3 origin) : dims_(dims), h_(h), origin_(origin) {
  if (dims.nx <= 0 || dims.ny <= 0 || dims.nz <= 0) throw ConfigError("grid dimensions must be positive");
  if (!(h > 0.0)) throw ConfigError("voxel width h must be positive");
  read_.resize(dims.count());
  write_.resize(dims.count());
}

void FluidGrid::mirrorToNext() {
  parallel::forRange(0, read_.size(), [&](std::size_t i) { write_[i] = read_[i]; }, 4096);
}

Vec3 FluidGrid::center(const Index3& c) const {
  return origin_ + h_ * Vec3(c.i + 0.5, c.j + 0.5, c.k + 0.5);
}

Vec3 FluidGrid::extentMax() const {
  return origin_ + h_ * Vec3(dims_.nx, dims_.ny, dims_.nz);
}

VoxelState FluidGrid::ambientState(const PhysicalConstants& consts) const {
  return stateFromPT(ambient_P_, ambient_T_, consts);
}

void initAmbient(FluidGrid& grid, double P, double T, const PhysicalConstants& consts) {
  if (!(P > 0.0)) throw ConfigError("ambient pressure must be positive, got " + std::to_string(P));
  if (!(T > 0.0)) throw ConfigError("ambient temperature must be positive, got " + std::to_string(T));
  grid.setAmbient(P, T);
  VoxelState s = grid.ambientState(consts);
  // Keep exactly the requested P and T rather than the round trip through rho.
  s.P = P;
  s.T = T;
  s.partial_volume = 1.0;
  s.flag = CellFlag::interior;
  auto cur = grid.current();
  auto nxt = grid.next();
  std::fill(cur.begin(), cur.end(), s);
  std::fill(nxt.begin(), nxt.end(), s);
}

double totalMass(const FluidGrid& grid) {
  const auto cells = grid.current();
  const double vol = grid.cellVolume();
  return parallel::sum(cells.size(), 0.0, [&](std::size_t i) {
    return cells[i].rho * cells[i].partial_volume * vol;
  });
}

double totalEnergy(const FluidGrid& grid) {
  const auto cells = grid.current();
  const double vol = grid.cellVolume();
  return parallel::sum(cells.size(), 0.0, [&](std::size_t i) {
    const VoxelState& c = cells[i];
    return c.rho * c.partial_volume * vol * c.totalEnergy();
  });
}

Vec3 totalMomentum(const FluidGrid& grid) {
  const auto cells = grid.current();
  const double vol = grid.cellVolume();
  return parallel::sum(cells.size(), Vec3(Vec3::Zero()), [&](std::size_t i) -> Vec3 {
    const VoxelState& c = cells[i];
    return (c.rho * c.partial_volume * vol) * c.v;
  });
}

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t x) {
  h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::uint64_t bitsOf(double d) { return std::bit_cast<std::uint64_t>(d); }

}  // namespace

std::uint64_t checksum(const FluidGrid& grid) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const VoxelState& c : grid.current()) {
    h = mix(h, bitsOf(c.rho));
    h = mix(h, bitsOf(c.v.x()));
    h = mix(h, bitsOf(c.v.y()));
    h = mix(h, bitsOf(c.v.z()));
    h = mix(h, bitsOf(c.N));
    h = mix(h, bitsOf(c.T));
    h = mix(h, bitsOf(c.P));
    h = mix(h, bitsOf(c.partial_volume));
    h = mix(h, static_cast<std::uint64_t>(c.flag));
  }
  return h;
}

}  // namespace blastvox
