#pragma once

#include "blastvox/geometry/mesh.hpp"

namespace blastvox {

struct MassProperties {
  double volume = 0.0;
  Vec3 center_of_mass = Vec3::Zero();
  Mat3 inertia = Mat3::Zero();  // about the centre of mass, world axes
};

/// Exact polyhedral mass properties of a closed mesh of uniform density
/// carrying total mass `mass`. Throws ConfigError for a mesh with no
/// positive volume or a non-positive mass.
MassProperties rigidInertia(const TriangleMesh& mesh, double mass);

}  // namespace blastvox
