#include "blastvox/geometry/inertia.hpp"

#include <cmath>

#include "blastvox/errors.hpp"

namespace blastvox {

MassProperties rigidInertia(const TriangleMesh& mesh, double mass) {
  if (!(mass > 0.0)) throw ConfigError("rigid body mass must be positive");
  if (mesh.vertices.empty()) throw ConfigError("cannot integrate an empty mesh");

  // Each triangle spans a tetrahedron with the reference point. The
  // canonical tetrahedron's second moment is (1 + delta_ij) / 120.
  Mat3 canonical;
  canonical << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  canonical /= 120.0;

  Vec3 ref = Vec3::Zero();
  for (const Vec3& v : mesh.vertices) ref += v;
  ref /= static_cast<double>(mesh.vertices.size());

  double volume = 0.0;
  Vec3 first = Vec3::Zero();
  Mat3 second = Mat3::Zero();
  for (const auto& t : mesh.triangles) {
    Mat3 a;
    a.col(0) = mesh.vertices[t[0]] - ref;
    a.col(1) = mesh.vertices[t[1]] - ref;
    a.col(2) = mesh.vertices[t[2]] - ref;
    const double det = a.determinant();
    volume += det / 6.0;
    first += det / 24.0 * (a.col(0) + a.col(1) + a.col(2));
    second += det * a * canonical * a.transpose();
  }
  if (!(volume > 0.0) || !std::isfinite(volume)) {
    throw ConfigError("mesh encloses no positive volume");
  }
  const Vec3 com_local = first / volume;
  const Mat3 cov = second - volume * com_local * com_local.transpose();
  const double density = mass / volume;

  MassProperties p;
  p.volume = volume;
  p.center_of_mass = ref + com_local;
  p.inertia = density * (cov.trace() * Mat3::Identity() - cov);
  return p;
}

}  // namespace blastvox
