#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include "blastvox/types.hpp"

namespace blastvox {

using Triangle = std::array<std::uint32_t, 3>;

struct Aabb {
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = Vec3::Constant(-std::numeric_limits<double>::infinity());

  void extend(const Vec3& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  bool empty() const { return (hi.array() < lo.array()).any(); }
};

/// Indexed triangle list. Counter-clockwise winding seen from outside gives
/// the outward normal.
class TriangleMesh {
 public:
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;

  TriangleMesh() = default;
  TriangleMesh(std::vector<Vec3> v, std::vector<Triangle> t) : vertices(std::move(v)), triangles(std::move(t)) {}

  std::size_t triangleCount() const { return triangles.size(); }
  bool empty() const { return triangles.empty(); }

  double area(std::size_t t) const;
  /// Unit outward normal (zero for a degenerate triangle).
  Vec3 normal(std::size_t t) const;
  Vec3 centroid(std::size_t t) const;
  /// Enclosed volume by the divergence theorem; positive for outward winding.
  double signedVolume() const;
  double surfaceArea() const;
  double maxEdgeLength() const;
  Aabb bounds() const;

  /// Throws ConfigError naming the first edge not shared by exactly two
  /// triangles, or an out-of-range vertex index.
  void validateManifold() const;

  TriangleMesh transformed(const Quat& rotation, const Vec3& translation) const;
  TriangleMesh translated(const Vec3& t) const;
  /// Uniform scaling about `pivot`.
  TriangleMesh scaled(double s, const Vec3& pivot) const;
  /// Midpoint 4-way splits until every edge is shorter than `max_edge`.
  TriangleMesh subdivided(double max_edge) const;
  /// Concatenation, reindexing the second mesh.
  void append(const TriangleMesh& other);
};

}  // namespace blastvox
