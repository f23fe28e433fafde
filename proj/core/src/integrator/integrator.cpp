#include "blastvox/integrator/integrator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "blastvox/fluidcore/parallel.hpp"

namespace blastvox {

void StepDiagnostics::accumulate(const StepDiagnostics& other) {
  density_clamps += other.density_clamps;
  energy_clamps += other.energy_clamps;
  limited_donors += other.limited_donors;
  vacuum_events += other.vacuum_events;
  max_speed = std::max(max_speed, other.max_speed);
  max_pressure = std::max(max_pressure, other.max_pressure);
  max_cfl = std::max(max_cfl, other.max_cfl);
}

namespace {

/// The six face neighbours of one voxel, ordered -x, +x, -y, +y, -z, +z.
struct Stencil {
  Neighbor n[6];

  Stencil(const BoundaryRules& rules, std::span<const VoxelState> cells, std::size_t idx,
          const Index3& c) {
    for (int axis = 0; axis < 3; ++axis) {
      n[2 * axis] = rules.neighbor(cells, idx, c, axis, -1);
      n[2 * axis + 1] = rules.neighbor(cells, idx, c, axis, +1);
    }
  }
  const Neighbor& minus(int axis) const { return n[2 * axis]; }
  const Neighbor& plus(int axis) const { return n[2 * axis + 1]; }
};

/// Fixed ambient values used for reads across free faces.
struct Ambient {
  double rho;
  double N;
  double P;
  double T;
};

Ambient ambientOf(const FluidGrid& grid, const PhysicalConstants& consts) {
  const VoxelState a = grid.ambientState(consts);
  return {a.rho, a.N, grid.ambientP(), grid.ambientT()};
}

/// Scalar copied across hard faces, ambient across free faces.
template <class Field>
double scalarAcross(const Neighbor& n, std::size_t self, double ambient, Field&& field) {
  switch (n.kind) {
    case NeighborKind::fluid:
      return field(n.index);
    case NeighborKind::mirror:
      return field(self);
    case NeighborKind::ambient:
      break;
  }
  return ambient;
}

/// Vector reflected across hard faces (normal component negated), zero
/// across free faces.
template <class Field>
Vec3 vectorAcross(const Neighbor& n, std::size_t self, int axis, Field&& field) {
  switch (n.kind) {
    case NeighborKind::fluid:
      return field(n.index);
    case NeighborKind::mirror: {
      Vec3 v = field(self);
      v[axis] = -v[axis];
      return v;
    }
    case NeighborKind::ambient:
      break;
  }
  return Vec3::Zero();
}

/// Open area fraction of the face towards `n`: the smaller partial volume.
double openFraction(std::span<const VoxelState> cells, const Neighbor& n, const VoxelState& self) {
  if (n.kind == NeighborKind::fluid) return std::min(self.partial_volume, cells[n.index].partial_volume);
  return std::min(self.partial_volume, 1.0);
}

/// Volume rate per unit open volume from face-averaged velocities, weighted
/// by open face fractions. Adjoint to the weighted pressure gradient, so the
/// pressure work and the kinetic energy gained cancel face by face.
template <class Field>
double weightedDivergence(std::span<const VoxelState> cells, std::size_t idx, const Stencil& st, double h,
                          Field&& field) {
  const VoxelState& c = cells[idx];
  const Vec3 v = field(idx);
  double div = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    const Neighbor& up = st.plus(axis);
    const Neighbor& dn = st.minus(axis);
    div += openFraction(cells, up, c) * (v[axis] + vectorAcross(up, idx, axis, field)[axis]);
    div -= openFraction(cells, dn, c) * (v[axis] + vectorAcross(dn, idx, axis, field)[axis]);
  }
  return div / (2.0 * h * c.partial_volume);
}

double divergenceAt(std::span<const VoxelState> cells, std::size_t idx, const Stencil& st, double h) {
  double div = 0.0;
  const auto vel = [&](std::size_t i) -> Vec3 { return cells[i].v; };
  for (int axis = 0; axis < 3; ++axis) {
    const double up = vectorAcross(st.plus(axis), idx, axis, vel)[axis];
    const double dn = vectorAcross(st.minus(axis), idx, axis, vel)[axis];
    div += (up - dn) / (2.0 * h);
  }
  return div;
}

template <class DivField>
Vec3 accelerationAt(std::span<const VoxelState> cells, std::size_t idx, const Stencil& st, double h,
                    const PhysicalConstants& consts, const Ambient& amb, DivField&& divAt) {
  const VoxelState& c = cells[idx];
  if (c.rho <= 0.0) return Vec3::Zero();
  const auto pressure = [&](std::size_t i) { return cells[i].P; };
  const auto vel = [&](std::size_t i) -> Vec3 { return cells[i].v; };
  Vec3 gradP;
  Vec3 gradDiv;
  Vec3 lap = Vec3::Zero();
  for (int axis = 0; axis < 3; ++axis) {
    const Neighbor& up = st.plus(axis);
    const Neighbor& dn = st.minus(axis);
    const double dP_up = scalarAcross(up, idx, amb.P, pressure) - c.P;
    const double dP_dn = c.P - scalarAcross(dn, idx, amb.P, pressure);
    gradP[axis] = (openFraction(cells, up, c) * dP_up + openFraction(cells, dn, c) * dP_dn) /
                  (2.0 * h * c.partial_volume);
    gradDiv[axis] = (scalarAcross(up, idx, 0.0, divAt) - scalarAcross(dn, idx, 0.0, divAt)) / (2.0 * h);
    lap += (vectorAcross(up, idx, axis, vel) + vectorAcross(dn, idx, axis, vel) - 2.0 * c.v) / (h * h);
  }
  return consts.g + (-gradP + (consts.mu / 3.0) * gradDiv + consts.mu * lap) / c.rho;
}

/// Grows a mask by `steps` face-neighbour layers (a Manhattan-distance ball).
std::vector<std::uint8_t> faceDilate(const GridDims& dims, std::vector<std::uint8_t> mask, int steps) {
  std::vector<std::uint8_t> next(mask.size());
  for (int s = 0; s < steps; ++s) {
    parallel::forRange(0, mask.size(), [&](std::size_t idx) {
      std::uint8_t v = mask[idx];
      const Index3 c = dims.coord(idx);
      for (int axis = 0; axis < 3 && !v; ++axis) {
        const std::size_t st = dims.stride(axis);
        if (c[axis] > 0 && mask[idx - st]) v = 1;
        if (c[axis] + 1 < dims[axis] && mask[idx + st]) v = 1;
      }
      next[idx] = v ? 1 : 0;
    }, 4096);
    mask.swap(next);
  }
  return mask;
}

}  // namespace

double viscousDissipation(const Mat3& grad, double mu) {
  const double div = grad.trace();
  double shear = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double s = grad(i, j) + grad(j, i);
      shear += s * s;
    }
  }
  return -(2.0 * mu / 3.0) * div * div + 0.5 * mu * shear;
}

Vec3 nonConvectiveAcceleration(const FluidGrid& grid, std::size_t idx, const PhysicalConstants& consts,
                               const BoundarySpec& boundary) {
  const BoundaryRules rules(grid.dims(), boundary);
  const auto cells = grid.current();
  const double h = grid.h();
  const Stencil st(rules, cells, idx, grid.dims().coord(idx));
  const auto divAt = [&](std::size_t i) {
    return divergenceAt(cells, i, Stencil(rules, cells, i, grid.dims().coord(i)), h);
  };
  return accelerationAt(cells, idx, st, h, consts, ambientOf(grid, consts), divAt);
}

FaceFlux donorAcceptorFlux(const FaceSide& lower, const FaceSide& upper, double face_velocity,
                           double dt, double h) {
  if (face_velocity == 0.0) return {};
  const FaceSide& donor = face_velocity > 0.0 ? lower : upper;
  const double open = std::min(lower.partial_volume, upper.partial_volume);
  FaceFlux f;
  f.mass = face_velocity * dt * h * h * open * donor.rho * donor.limiter;
  f.momentum = f.mass * donor.v;
  f.energy = f.mass * donor.E;
  return f;
}

FaceFlux donorAcceptorFlux(const FluidGrid& grid, std::size_t i, std::size_t j,
                           std::span<const Vec3> vbar, double dt) {
  const GridDims& dims = grid.dims();
  const Index3 a = dims.coord(i);
  const Index3 b = dims.coord(j);
  int axis = 0;
  for (int d = 0; d < 3; ++d) {
    if (a[d] != b[d]) axis = d;
  }
  const auto side = [&](std::size_t idx) {
    const VoxelState& c = grid.at(idx);
    return FaceSide{c.rho, c.v, c.totalEnergy(), c.partial_volume, 1.0};
  };
  const bool forward = b[axis] > a[axis];
  const std::size_t lo = forward ? i : j;
  const std::size_t hi = forward ? j : i;
  FaceFlux f = donorAcceptorFlux(side(lo), side(hi), faceVelocity(vbar[lo], vbar[hi], axis), dt, grid.h());
  if (!forward) {
    f.mass = -f.mass;
    f.momentum = -f.momentum;
    f.energy = -f.energy;
  }
  return f;
}

void Integrator::prepare(const FluidGrid& grid, const StepContext& ctx) {
  const std::size_t n = grid.size();
  if (divergence_.size() != n) {
    divergence_.assign(n, 0.0);
    v_tilde_.assign(n, Vec3::Zero());
    v_bar_.assign(n, Vec3::Zero());
    n_tilde_.assign(n, 0.0);
    e_tilde_.assign(n, 0.0);
    limiter_.assign(n, 1.0);
    for (auto& f : flux_) f.assign(n, FaceFlux{});
  }
  extended_mask_.assign(n, 0);
  const auto cells = grid.current();
  const GridDims& dims = grid.dims();
  // Pruned voxels within reach of the stencils of active ones are updated in
  // full, so pruning changes nothing wherever quiet voxels are truly at rest.
  if (ctx.active.cells.size() == n) {
    computed_ = ctx.active.mask;
  } else {
    computed_ = faceDilate(dims, ctx.active.mask, kStencilReach);
    for (std::size_t i = 0; i < n; ++i) {
      if (cells[i].partial_volume <= 0.0) computed_[i] = 0;
    }
  }
  const auto& act = computed_;
  // Computed voxels plus their fluid face neighbours: the voxels whose state
  // can change this step.
  parallel::forRange(0, n, [&](std::size_t idx) {
    if (cells[idx].partial_volume <= 0.0) return;
    if (act[idx]) {
      extended_mask_[idx] = 1;
      return;
    }
    const Index3 c = dims.coord(idx);
    for (int axis = 0; axis < 3 && !extended_mask_[idx]; ++axis) {
      const std::size_t s = dims.stride(axis);
      if (c[axis] > 0 && act[idx - s]) extended_mask_[idx] = 1;
      if (c[axis] + 1 < dims[axis] && act[idx + s]) extended_mask_[idx] = 1;
    }
  }, 2048);
  extended_.clear();
  for (std::size_t i = 0; i < n; ++i) {
    if (extended_mask_[i]) extended_.push_back(static_cast<std::uint32_t>(i));
  }
}

void Integrator::stepNonConvective(const FluidGrid& grid, StepContext& ctx) {
  if (ctx.active.mask.size() != grid.size()) ctx.active = fullActiveSet(grid);
  prepare(grid, ctx);
  const auto cells = grid.current();
  const GridDims& dims = grid.dims();
  const BoundaryRules rules(dims, ctx.boundary);
  const PhysicalConstants& consts = ctx.consts;
  const Ambient amb = ambientOf(grid, consts);
  const double h = grid.h();
  const double dt = ctx.dt;
  const auto& act = computed_;
  std::atomic<std::uint64_t> energy_clamps{0};

  parallel::forRange(0, extended_.size(), [&](std::size_t e) {
    const std::size_t idx = extended_[e];
    divergence_[idx] = divergenceAt(cells, idx, Stencil(rules, cells, idx, dims.coord(idx)), h);
  });

  const auto divAt = [&](std::size_t i) { return divergence_[i]; };
  parallel::forRange(0, extended_.size(), [&](std::size_t e) {
    const std::size_t idx = extended_[e];
    const VoxelState& c = cells[idx];
    if (!act[idx]) {
      v_tilde_[idx] = c.v;
      v_bar_[idx] = c.v;
      return;
    }
    const Stencil st(rules, cells, idx, dims.coord(idx));
    const Vec3 a = accelerationAt(cells, idx, st, h, consts, amb, divAt);
    v_tilde_[idx] = c.v + dt * a;
    v_bar_[idx] = 0.5 * (v_tilde_[idx] + c.v);
  });

  const auto vbarAt = [&](std::size_t i) -> Vec3 { return v_bar_[i]; };
  const auto tempAt = [&](std::size_t i) { return cells[i].T; };
  parallel::forRange(0, extended_.size(), [&](std::size_t e) {
    const std::size_t idx = extended_[e];
    const VoxelState& c = cells[idx];
    double n_new = c.N;
    if (act[idx] && c.rho > 0.0) {
      const Stencil st(rules, cells, idx, dims.coord(idx));
      double lapT = 0.0;
      Mat3 grad;
      for (int axis = 0; axis < 3; ++axis) {
        const Neighbor& up = st.plus(axis);
        const Neighbor& dn = st.minus(axis);
        lapT += (scalarAcross(up, idx, amb.T, tempAt) + scalarAcross(dn, idx, amb.T, tempAt) - 2.0 * c.T) / (h * h);
        grad.col(axis) = (vectorAcross(up, idx, axis, vbarAt) - vectorAcross(dn, idx, axis, vbarAt)) / (2.0 * h);
      }
      const double work = c.P * weightedDivergence(cells, idx, st, h, vbarAt);
      const double phi = viscousDissipation(grad, consts.mu);
      n_new = c.N + dt * (consts.k_thermal * lapT - work + phi) / c.rho;
      if (n_new < 0.0) {
        n_new = 0.0;
        energy_clamps.fetch_add(1, std::memory_order_relaxed);
      }
    }
    n_tilde_[idx] = n_new;
    e_tilde_[idx] = n_new + 0.5 * v_tilde_[idx].squaredNorm();
  });
  ctx.diagnostics.energy_clamps += energy_clamps.load();
}

void Integrator::stepConvective(FluidGrid& grid, StepContext& ctx) {
  const auto cells = grid.current();
  auto out = grid.next();
  const GridDims& dims = grid.dims();
  const BoundaryRules rules(dims, ctx.boundary);
  const PhysicalConstants& consts = ctx.consts;
  const Ambient amb = ambientOf(grid, consts);
  const double h = grid.h();
  const double dt = ctx.dt;
  const double volume = grid.cellVolume();
  const auto& act = computed_;
  const auto& active = ctx.active.mask;
  const bool pruning = ctx.boundary.prune_enabled;
  std::atomic<std::uint64_t> limited{0};
  std::atomic<std::uint64_t> energy_clamps{0};
  std::atomic<std::uint64_t> density_clamps{0};
  std::atomic<std::uint64_t> vacuum{0};

  const auto faceComputed = [&](std::size_t a, std::size_t b) { return act[a] || act[b]; };
  const auto sideOf = [&](std::size_t i) {
    return FaceSide{cells[i].rho, v_tilde_[i], e_tilde_[i], cells[i].partial_volume, limiter_[i]};
  };
  const FaceSide ambientSide{amb.rho, Vec3::Zero(), amb.N, 1.0, 1.0};

  // Outflow limiter: a donor never sends more than the mass it holds.
  parallel::forRange(0, extended_.size(), [&](std::size_t e) {
    const std::size_t idx = extended_[e];
    const VoxelState& c = cells[idx];
    const Stencil st(rules, cells, idx, dims.coord(idx));
    double outflow = 0.0;
    for (int axis = 0; axis < 3; ++axis) {
      for (int side = 0; side < 2; ++side) {
        const Neighbor& n = st.n[2 * axis + side];
        const double dir = side == 0 ? -1.0 : 1.0;
        double u = 0.0;
        double open = c.partial_volume;
        if (n.kind == NeighborKind::fluid && faceComputed(idx, n.index)) {
          u = faceVelocity(v_bar_[idx], v_bar_[n.index], axis);
          open = std::min(open, cells[n.index].partial_volume);
        } else if (n.kind == NeighborKind::ambient && act[idx]) {
          u = 0.5 * v_bar_[idx][axis];
          open = std::min(open, 1.0);
        }
        if (u * dir > 0.0) outflow += std::abs(u) * dt * open / (c.partial_volume * h);
      }
    }
    if (outflow > 1.0) {
      limiter_[idx] = 1.0 / outflow;
      limited.fetch_add(1, std::memory_order_relaxed);
    } else {
      limiter_[idx] = 1.0;
    }
  });

  // Each interior face flux is computed once, by its lower voxel.
  parallel::forRange(0, extended_.size(), [&](std::size_t e) {
    const std::size_t idx = extended_[e];
    const Index3 c = dims.coord(idx);
    for (int axis = 0; axis < 3; ++axis) {
      const Neighbor n = rules.neighbor(cells, idx, c, axis, +1);
      if (n.kind != NeighborKind::fluid || !faceComputed(idx, n.index)) continue;
      flux_[axis][idx] = donorAcceptorFlux(sideOf(idx), sideOf(n.index),
                                           faceVelocity(v_bar_[idx], v_bar_[n.index], axis), dt, h);
    }
  });

  parallel::forRange(0, cells.size(), [&](std::size_t idx) {
    if (!extended_mask_[idx]) {
      out[idx] = cells[idx];
      if (pruning && cells[idx].partial_volume > 0.0) out[idx].flag = CellFlag::pruned;
    }
  }, 4096);

  parallel::forRange(0, extended_.size(), [&](std::size_t e) {
    const std::size_t idx = extended_[e];
    const VoxelState& c = cells[idx];
    const Index3 ijk = dims.coord(idx);
    const Stencil st(rules, cells, idx, ijk);
    const double m0 = c.rho * c.partial_volume * volume;
    double mass = m0;
    bool touched = false;
    const auto moves = [&](const FaceFlux& f) {
      touched = touched || f.mass != 0.0 || f.energy != 0.0 || f.momentum != Vec3::Zero();
    };
    Vec3 momentum = m0 * v_tilde_[idx];
    double energy = m0 * e_tilde_[idx];
    bool on_free_face = false;
    for (int axis = 0; axis < 3; ++axis) {
      const Neighbor& dn = st.minus(axis);
      if (dn.kind == NeighborKind::fluid) {
        if (faceComputed(dn.index, idx)) {
          const FaceFlux& f = flux_[axis][dn.index];
          moves(f);
          mass += f.mass;
          momentum += f.momentum;
          energy += f.energy;
        }
      } else if (dn.kind == NeighborKind::ambient) {
        on_free_face = true;
        if (act[idx]) {
          const FaceFlux f = donorAcceptorFlux(ambientSide, sideOf(idx), 0.5 * v_bar_[idx][axis], dt, h);
          moves(f);
          mass += f.mass;
          momentum += f.momentum;
          energy += f.energy;
        }
      }
      const Neighbor& up = st.plus(axis);
      if (up.kind == NeighborKind::fluid) {
        if (faceComputed(idx, up.index)) {
          const FaceFlux& f = flux_[axis][idx];
          moves(f);
          mass -= f.mass;
          momentum -= f.momentum;
          energy -= f.energy;
        }
      } else if (up.kind == NeighborKind::ambient) {
        on_free_face = true;
        if (act[idx]) {
          const FaceFlux f = donorAcceptorFlux(sideOf(idx), ambientSide, 0.5 * v_bar_[idx][axis], dt, h);
          moves(f);
          mass -= f.mass;
          momentum -= f.momentum;
          energy -= f.energy;
        }
      }
    }

    VoxelState s = c;
    if (!touched && v_tilde_[idx] == c.v && n_tilde_[idx] == c.N) {
      // Nothing moved in or out and no source acted: keep the state exactly.
    } else if (mass > 0.0) {
      s.rho = mass / (c.partial_volume * volume);
      s.v = momentum / mass;
      s.N = energy / mass - 0.5 * s.v.squaredNorm();
      if (s.N < 0.0) {
        s.N = 0.0;
        energy_clamps.fetch_add(1, std::memory_order_relaxed);
      }
    } else {
      if (mass < 0.0) density_clamps.fetch_add(1, std::memory_order_relaxed);
      if (m0 > 0.0) vacuum.fetch_add(1, std::memory_order_relaxed);
      s.rho = 0.0;
      s.v = Vec3::Zero();
      s.N = 0.0;
    }
    syncInPlace(s, consts);
    if (active[idx]) s.flag = on_free_face ? CellFlag::free_boundary : CellFlag::interior;
    else s.flag = pruning ? CellFlag::pruned : CellFlag::interior;
    out[idx] = s;
  });

  StepDiagnostics d;
  d.limited_donors = limited.load();
  d.energy_clamps = energy_clamps.load();
  d.density_clamps = density_clamps.load();
  d.vacuum_events = vacuum.load();
  struct Peak {
    double speed = 0.0;
    double pressure = 0.0;
    double cfl = 0.0;
  };
  // max is order independent, so a plain sequential scan stays deterministic
  Peak peak;
  for (const std::uint32_t idx : extended_) {
    const VoxelState& s = out[idx];
    const double speed = s.v.norm();
    peak.speed = std::max(peak.speed, speed);
    peak.pressure = std::max(peak.pressure, s.P);
    peak.cfl = std::max(peak.cfl, (speed + soundSpeed(s, consts)) * dt / h);
  }
  d.max_speed = peak.speed;
  d.max_pressure = peak.pressure;
  d.max_cfl = peak.cfl;
  ctx.diagnostics.accumulate(d);
}

void Integrator::step(FluidGrid& grid, StepContext& ctx) {
  ctx.active = updateActiveSet(grid, ctx.boundary, ctx.forced_active);
  stepNonConvective(grid, ctx);
  stepConvective(grid, ctx);
  grid.swapBuffers();
}

}  // namespace blastvox
