#pragma once

#include <string>
#include <vector>

#include "blastvox/fluidcore/fluid_grid.hpp"
#include "blastvox/geometry/mesh.hpp"

namespace blastvox {

enum class MotionMode : std::uint8_t {
  fixed,      // never moves
  dynamic,    // integrates fluid forces and gravity
  kinematic,  // moves at its prescribed velocities regardless of load
};

/// A rigid object: a body-frame mesh (centre of mass at the origin) plus
/// its pose and velocities.
struct RigidBody {
  std::string name;
  TriangleMesh mesh;  // body frame, subdivided for load sampling
  TriangleMesh hull;  // body frame, the original surface used for voxelization
  double mass = 1.0;
  Mat3 inertia = Mat3::Identity();  // body frame, about the centre of mass
  Vec3 position = Vec3::Zero();     // centre of mass, world
  Quat orientation = Quat::Identity();
  Vec3 linear_velocity = Vec3::Zero();
  Vec3 angular_velocity = Vec3::Zero();  // world frame
  MotionMode mode = MotionMode::fixed;

  // pose at the last voxelization
  Vec3 voxelized_position = Vec3::Zero();
  Quat voxelized_orientation = Quat::Identity();

  bool movable() const { return mode != MotionMode::fixed; }
  TriangleMesh worldMesh() const { return mesh.transformed(orientation, position); }
  TriangleMesh worldHull() const { return hull.transformed(orientation, position); }
  Mat3 worldInertia() const;
  /// Velocity of the material point currently at world position p.
  Vec3 pointVelocity(const Vec3& p) const { return linear_velocity + angular_velocity.cross(p - position); }
  /// Largest distance any surface point has moved since the last voxelization.
  double displacementSinceVoxelization() const;
  void markVoxelized() {
    voxelized_position = position;
    voxelized_orientation = orientation;
  }
};

/// Builds a body from a world-space mesh of uniform density. The mesh is
/// subdivided until every edge is shorter than `max_edge` (skipped when
/// max_edge <= 0) and re-expressed about its centre of mass.
RigidBody makeRigidBody(std::string name, const TriangleMesh& world_mesh, double mass, MotionMode mode,
                        double max_edge);

/// P - ambient_P plus the stagnation term 1/2 rho ((v_fluid - v_surface) . n)^2.
double dynamicOverpressure(double P, double ambient_P, double rho, const Vec3& v_fluid, const Vec3& v_surface,
                           const Vec3& n);

struct FluidLoad {
  Vec3 force = Vec3::Zero();
  Vec3 torque = Vec3::Zero();  // about the centre of mass
  std::vector<Vec3> triangle_forces;
  std::size_t dry_triangles = 0;  // triangles with no fluid around their centroid
};

/// Per-triangle pressure loads f = -n A P_dyn with the fluid sampled at each
/// centroid (open voxels only), summed in triangle order.
FluidLoad fluidLoad(const FluidGrid& grid, const RigidBody& body);

/// Explicit Euler update of velocities then pose. Dynamic bodies feel the
/// load and gravity; kinematic bodies keep their velocities. The
/// orientation is renormalised.
void integrateBody(RigidBody& body, const FluidLoad& load, const Vec3& gravity, double dt);

/// fluidLoad followed by integrateBody.
FluidLoad applyFluidForces(const FluidGrid& grid, RigidBody& body, const Vec3& gravity, double dt);

}  // namespace blastvox
