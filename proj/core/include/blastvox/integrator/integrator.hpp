#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "blastvox/boundary/boundary.hpp"
#include "blastvox/fluidcore/fluid_grid.hpp"

namespace blastvox {

/// Counters gathered while advancing one step.
struct StepDiagnostics {
  std::uint64_t density_clamps = 0;  // negative density clamped to zero
  std::uint64_t energy_clamps = 0;   // negative internal energy clamped to zero
  std::uint64_t limited_donors = 0;  // donors whose outflow exceeded their mass
  std::uint64_t vacuum_events = 0;   // voxels emptied completely
  double max_speed = 0.0;            // m/s
  double max_pressure = 0.0;         // Pa
  double max_cfl = 0.0;              // max (|v| + c) dt / h over updated voxels

  void accumulate(const StepDiagnostics& other);
};

struct StepContext {
  double dt = 1.0e-4;
  PhysicalConstants consts;
  BoundarySpec boundary;
  ActiveSet active;
  /// Optional per-voxel mask of voxels that must stay active (moving objects).
  std::vector<std::uint8_t> forced_active;
  StepDiagnostics diagnostics;
};

/// Non-convective acceleration at a voxel: the body force plus pressure and
/// viscous terms of the momentum equation, central differences throughout.
/// Each face's pressure difference is weighted by its open fraction (the
/// smaller partial volume) over the voxel's own partial volume, which reduces
/// to the plain central difference in open fluid. Vacuum voxels have zero
/// acceleration.
Vec3 nonConvectiveAcceleration(const FluidGrid& grid, std::size_t idx, const PhysicalConstants& consts,
                               const BoundarySpec& boundary);

/// Viscous dissipation for a velocity-gradient tensor, grad(i, j) = dv_i / dx_j.
double viscousDissipation(const Mat3& grad, double mu);

/// One side of a voxel face as seen by the donor-acceptor transport.
struct FaceSide {
  double rho = 0.0;
  Vec3 v = Vec3::Zero();  // velocity carried with transferred mass
  double E = 0.0;         // total energy per unit mass carried with it
  double partial_volume = 1.0;
  double limiter = 1.0;   // outflow scale in (0, 1]
};

/// Signed transfer across a face, positive from the lower to the upper side.
struct FaceFlux {
  double mass = 0.0;               // kg
  Vec3 momentum = Vec3::Zero();    // kg m/s
  double energy = 0.0;             // J

  /// Density change of the lower/upper voxel caused by this flux.
  double lowerDensityChange(double pv_lower, double h) const { return -mass / (pv_lower * h * h * h); }
  double upperDensityChange(double pv_upper, double h) const { return mass / (pv_upper * h * h * h); }
};

/// Face-normal transport velocity: the mean of both averaged velocities along
/// the face axis.
inline double faceVelocity(const Vec3& vbar_lower, const Vec3& vbar_upper, int axis) {
  return 0.5 * (vbar_lower[axis] + vbar_upper[axis]);
}

/// Donor-acceptor transfer across one face. The upstream side donates mass
/// rho_donor * |u| dt h^2 * min(pv_lower, pv_upper), carrying its own
/// per-unit-mass momentum and total energy. u == 0 transfers nothing.
FaceFlux donorAcceptorFlux(const FaceSide& lower, const FaceSide& upper, double face_velocity,
                           double dt, double h);

/// Grid form: the face between voxel `i` and its face neighbour `j`, using
/// `vbar` (one entry per voxel) as the transport field and the stored
/// velocity and energy as carried quantities. Returns the flux oriented from
/// i towards j.
FaceFlux donorAcceptorFlux(const FluidGrid& grid, std::size_t i, std::size_t j,
                           std::span<const Vec3> vbar, double dt);

/// Two-phase explicit integrator with persistent scratch storage.
///
/// Phase one evaluates the non-convective terms: tentative velocity
/// v~ = v + dt a, averaged velocity v- = (v~ + v) / 2, and internal energy
/// from conduction, pressure work and viscous dissipation evaluated with v-.
/// Phase two moves mass across every face with the donor-acceptor rule using
/// v- as the transport velocity; the transferred mass carries the donor's v~
/// and total energy, and each voxel's new velocity and internal energy are
/// recovered from the conserved sums divided by its new mass.
class Integrator {
 public:
  /// Phase one on the active voxels of `ctx`.
  void stepNonConvective(const FluidGrid& grid, StepContext& ctx);
  /// Phase two plus the state-equation sync, written into grid.next().
  /// Requires stepNonConvective on the same grid state.
  void stepConvective(FluidGrid& grid, StepContext& ctx);
  /// Refreshes the active set, runs both phases and swaps buffers once.
  void step(FluidGrid& grid, StepContext& ctx);

  std::span<const Vec3> tentativeVelocity() const { return v_tilde_; }
  std::span<const Vec3> averagedVelocity() const { return v_bar_; }
  std::span<const double> nonConvectiveEnergy() const { return n_tilde_; }

 private:
  void prepare(const FluidGrid& grid, const StepContext& ctx);

  /// Cells reached by the widest stencil: pressure and viscous terms read
  /// neighbours of neighbours, and the energy update reads their v-.
  static constexpr int kStencilReach = 3;

  std::vector<std::uint8_t> computed_;
  std::vector<std::uint8_t> extended_mask_;
  std::vector<std::uint32_t> extended_;
  std::vector<double> divergence_;
  std::vector<Vec3> v_tilde_;
  std::vector<Vec3> v_bar_;
  std::vector<double> n_tilde_;
  std::vector<double> e_tilde_;
  std::vector<double> limiter_;
  std::vector<FaceFlux> flux_[3];
};

}  // namespace blastvox
