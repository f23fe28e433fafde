#include "blastvox/coupling/rigid_body.hpp"

#include <algorithm>

#include "blastvox/coupling/sampling.hpp"
#include "blastvox/geometry/inertia.hpp"

namespace blastvox {

Mat3 RigidBody::worldInertia() const {
  const Mat3 r = orientation.toRotationMatrix();
  return r * inertia * r.transpose();
}

double RigidBody::displacementSinceVoxelization() const {
  const Mat3 now = orientation.toRotationMatrix();
  const Mat3 then = voxelized_orientation.toRotationMatrix();
  double worst = 0.0;
  // The distance moved is convex in the point, so the hull vertices bound it.
  for (const Vec3& v : hull.vertices) {
    const Vec3 a = now * v + position;
    const Vec3 b = then * v + voxelized_position;
    worst = std::max(worst, (a - b).norm());
  }
  return worst;
}

RigidBody makeRigidBody(std::string name, const TriangleMesh& world_mesh, double mass, MotionMode mode,
                        double max_edge) {
  world_mesh.validateManifold();
  const MassProperties props = rigidInertia(world_mesh, mass);
  RigidBody b;
  b.name = std::move(name);
  const TriangleMesh fine = max_edge > 0.0 ? world_mesh.subdivided(max_edge) : world_mesh;
  b.mesh = fine.translated(-props.center_of_mass);
  b.hull = world_mesh.translated(-props.center_of_mass);
  b.mass = mass;
  b.inertia = props.inertia;
  b.position = props.center_of_mass;
  b.mode = mode;
  b.markVoxelized();
  return b;
}

double dynamicOverpressure(double P, double ambient_P, double rho, const Vec3& v_fluid, const Vec3& v_surface,
                           const Vec3& n) {
  const double vn = (v_fluid - v_surface).dot(n);
  return (P - ambient_P) + 0.5 * rho * vn * vn;
}

FluidLoad fluidLoad(const FluidGrid& grid, const RigidBody& body) {
  FluidLoad load;
  const TriangleMesh world = body.worldMesh();
  load.triangle_forces.resize(world.triangleCount(), Vec3::Zero());
  for (std::size_t t = 0; t < world.triangleCount(); ++t) {
    const Vec3 c = world.centroid(t);
    const FluidSample s = sampleFluid(grid, c, true);
    if (s.fluid_weight <= 0.0) {
      ++load.dry_triangles;
      continue;
    }
    const Vec3 n = world.normal(t);
    const double p_dyn = dynamicOverpressure(s.P, grid.ambientP(), s.rho, s.v, body.pointVelocity(c), n);
    const Vec3 f = -n * world.area(t) * p_dyn;
    load.triangle_forces[t] = f;
    load.force += f;
    load.torque += (c - body.position).cross(f);
  }
  return load;
}

void integrateBody(RigidBody& body, const FluidLoad& load, const Vec3& gravity, double dt) {
  if (body.mode == MotionMode::fixed) return;
  const Vec3 v_old = body.linear_velocity;
  const Vec3 w_old = body.angular_velocity;
  if (body.mode == MotionMode::dynamic) {
    body.linear_velocity += dt * (load.force / body.mass + gravity);
    const Mat3 I = body.worldInertia();
    const Vec3 gyro = w_old.cross(I * w_old);
    body.angular_velocity += dt * I.ldlt().solve(load.torque - gyro);
  }
  body.position += dt * v_old;
  const Quat spin(0.0, w_old.x(), w_old.y(), w_old.z());
  Quat dq = spin * body.orientation;
  body.orientation.coeffs() += 0.5 * dt * dq.coeffs();
  body.orientation.normalize();
}

FluidLoad applyFluidForces(const FluidGrid& grid, RigidBody& body, const Vec3& gravity, double dt) {
  FluidLoad load = fluidLoad(grid, body);
  integrateBody(body, load, gravity, dt);
  return load;
}

}  // namespace blastvox
