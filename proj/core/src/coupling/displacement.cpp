#include "blastvox/coupling/displacement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "blastvox/errors.hpp"

namespace blastvox {

VoxelState adiabaticCompress(const VoxelState& cell, double V1, double V2, const PhysicalConstants& consts) {
  if (!(V1 > 0.0) || !(V2 > 0.0)) throw std::invalid_argument("adiabaticCompress needs positive volumes");
  VoxelState out = cell;
  out.partial_volume = V2;
  if (V1 == V2) return out;
  const double mass = cell.rho * V1;
  double rho2 = mass / V2;
  // Nudge by a few ulps until the held mass matches bit for bit.
  for (int i = 0; i < 4 && rho2 * V2 != mass; ++i) {
    rho2 = std::nextafter(rho2, rho2 * V2 < mass ? std::numeric_limits<double>::infinity() : 0.0);
  }
  out.rho = rho2;
  if (cell.rho > 0.0) {
    out.T = cell.T * std::pow(rho2 / cell.rho, consts.gamma() - 1.0);
    out.N = consts.c_v * out.T;
  }
  syncInPlace(out, consts);
  return out;
}

OpeningSplit mergeVoxelZeroToNonzero(double V_A2, double V_B1, double V_B2) {
  OpeningSplit s;
  const double total = V_A2 + V_B2;
  if (!(total > 0.0)) return s;
  s.initial_A = V_A2 * V_B1 / total;
  s.initial_B = V_B1 - s.initial_A;
  s.delta_A = V_A2 - s.initial_A;
  s.delta_B = V_B2 - s.initial_B;
  return s;
}

double mergeVoxelNonzeroToZero(const VoxelState& A, const VoxelState& B, double V_B2, const PhysicalConstants& consts,
                               VoxelState& merged) {
  const double VA = A.partial_volume;
  const double VB = B.partial_volume;
  const double mA = A.rho * VA;
  const double mB = B.rho * VB;
  const double m = mA + mB;
  merged = B;
  merged.partial_volume = VA + VB;
  if (m > 0.0) {
    merged.v = (mA * A.v + mB * B.v) / m;
    const double E = (mA * A.totalEnergy() + mB * B.totalEnergy()) / m;
    merged.N = std::max(0.0, E - 0.5 * merged.v.squaredNorm());
    merged.rho = m / merged.partial_volume;
  } else {
    merged.rho = 0.0;
    merged.v = Vec3::Zero();
    merged.N = 0.0;
  }
  syncInPlace(merged, consts);
  return V_B2 - merged.partial_volume;
}

DisplacementModel::DisplacementModel(const FluidGrid& grid) : target_(grid.size()) {
  const auto cells = grid.current();
  for (std::size_t i = 0; i < cells.size(); ++i) target_[i] = cells[i].partial_volume;
}

long DisplacementModel::findPartner(const FluidGrid& grid, std::size_t idx, int axis, int direction) const {
  const GridDims& d = grid.dims();
  const Index3 c = d.coord(idx);
  const auto open = [&](long j) { return grid.at(static_cast<std::size_t>(j)).partial_volume > 0.0 && target_[j] > 0.0; };
  // Preferred direction first, then the opposite side, then the other axes.
  int order[6][2] = {{axis, direction}, {axis, -direction}, {(axis + 1) % 3, 1}, {(axis + 1) % 3, -1},
                     {(axis + 2) % 3, 1}, {(axis + 2) % 3, -1}};
  for (const auto& o : order) {
    Index3 q = c;
    if (o[0] == 0) q.i += o[1];
    if (o[0] == 1) q.j += o[1];
    if (o[0] == 2) q.k += o[1];
    if (!d.contains(q)) continue;
    const long j = static_cast<long>(d.index(q));
    if (open(j)) return j;
  }
  return -1;
}

void DisplacementModel::schedule(FluidGrid& grid, std::span<const double> free_fraction,
                                 const std::function<Vec3(std::size_t)>& piston, const PhysicalConstants& consts) {
  if (free_fraction.size() != grid.size()) throw std::invalid_argument("free fraction size mismatch");
  if (target_.size() != grid.size()) *this = DisplacementModel(grid);
  const double h = grid.h();
  std::map<std::uint32_t, Entry> pending;
  for (const Entry& e : pending_) pending.emplace(e.index, e);

  std::vector<std::uint32_t> changed;
  for (std::size_t i = 0; i < free_fraction.size(); ++i) {
    if (free_fraction[i] != target_[i]) changed.push_back(static_cast<std::uint32_t>(i));
  }
  for (const auto i : changed) target_[i] = free_fraction[i];

  const auto entryFor = [&](std::uint32_t i, const Vec3& vp) {
    int axis = 0;
    for (int a = 1; a < 3; ++a) {
      if (std::abs(vp[a]) > std::abs(vp[axis])) axis = a;
    }
    const double speed = std::abs(vp[axis]);
    Entry e{i, speed / h, static_cast<std::int8_t>(axis), static_cast<std::int8_t>(vp[axis] < 0.0 ? -1 : 1)};
    return e;
  };

  for (const auto i : changed) {
    const Vec3 vp = piston(i);
    const Entry e = entryFor(i, vp);
    VoxelState& A = grid.at(i);
    if (A.partial_volume <= 0.0 && target_[i] > 0.0) {
      // The surface moved away: A opens, taking gas from the side it left.
      const long b = findPartner(grid, i, e.axis, -e.direction);
      if (b < 0) {
        ++stats_.orphans;
        A = VoxelState{};
        A.partial_volume = target_[i];
        pending.erase(i);
        continue;
      }
      VoxelState& B = grid.at(static_cast<std::size_t>(b));
      const OpeningSplit s = mergeVoxelZeroToNonzero(target_[i], B.partial_volume, target_[b]);
      const double mass_B = B.rho * B.partial_volume;
      A = B;
      A.partial_volume = s.initial_A;
      B.partial_volume = s.initial_B;
      A.rho = B.rho = mass_B / (s.initial_A + s.initial_B);
      ++stats_.openings;
      pending[i] = e;
      const auto bu = static_cast<std::uint32_t>(b);
      if (!pending.count(bu)) pending[bu] = entryFor(bu, vp);
    } else if (A.partial_volume > 0.0 && target_[i] <= 0.0) {
      // The surface swept over A: its gas joins the voxel ahead.
      const long b = findPartner(grid, i, e.axis, e.direction);
      if (b < 0) {
        ++stats_.orphans;
        pending[i] = e;
        continue;
      }
      VoxelState& B = grid.at(static_cast<std::size_t>(b));
      VoxelState merged;
      mergeVoxelNonzeroToZero(A, B, target_[b], consts, merged);
      merged.flag = B.flag;
      B = merged;
      A = VoxelState{};
      A.partial_volume = 0.0;
      A.flag = CellFlag::hard_boundary;
      ++stats_.closings;
      pending.erase(i);
      const auto bu = static_cast<std::uint32_t>(b);
      if (!pending.count(bu)) pending[bu] = entryFor(bu, vp);
    } else {
      pending[i] = e;
    }
  }
  pending_.clear();
  for (const auto& [idx, e] : pending) pending_.push_back(e);
}

void DisplacementModel::advance(FluidGrid& grid, double dt, const PhysicalConstants& consts) {
  std::vector<Entry> keep;
  for (const Entry& e : pending_) {
    VoxelState& c = grid.at(e.index);
    const double target = target_[e.index];
    const double V1 = c.partial_volume;
    if (V1 == target) continue;
    if (!(V1 > 0.0)) {
      // Nothing to compress; the voxel waits for an opening merge.
      if (target > 0.0) c.partial_volume = target;
      continue;
    }
    if (!(target > 0.0)) {
      // A closing voxel without an open partner keeps its gas until one frees up.
      keep.push_back(e);
      continue;
    }
    const double step = e.rate * dt;
    double V2 = target;
    if (e.rate > 0.0 && std::abs(target - V1) > step) V2 = V1 + (target > V1 ? step : -step);
    c = adiabaticCompress(c, V1, V2, consts);
    ++stats_.drained_cells;
    if (V2 != target) keep.push_back(e);
  }
  pending_ = std::move(keep);
}

}  // namespace blastvox
