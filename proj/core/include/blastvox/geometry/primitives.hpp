#pragma once

#include "blastvox/geometry/mesh.hpp"

namespace blastvox {

/// Axis-aligned box with outward winding.
TriangleMesh makeBox(const Vec3& lo, const Vec3& hi);

/// Geodesic sphere built from an octahedron whose faces are split into
/// n^2 triangles (8 n^2 in total). The vertex set and triangulation are
/// invariant under the 48 symmetries of the cube about `center`.
TriangleMesh makeSphere(const Vec3& center, double radius, int n = 16);

/// Closed cylinder along z.
TriangleMesh makeCylinder(const Vec3& center, double radius, double height, int segments = 48);

/// Torus in the xy plane around `center`.
TriangleMesh makeTorus(const Vec3& center, double major_radius, double minor_radius, int major_segments = 48,
                       int minor_segments = 24);

/// Triangular prism: an isosceles triangle of base `width` and apex
/// `height` in the xz plane (apex towards +z), extruded `length` along y.
/// `center` is the midpoint of the base rectangle.
TriangleMesh makeWedge(const Vec3& center, double width, double height, double length);

/// Uniform rescale about `pivot` so the enclosed volume equals `volume`.
TriangleMesh scaledToVolume(const TriangleMesh& mesh, double volume, const Vec3& pivot);

}  // namespace blastvox
