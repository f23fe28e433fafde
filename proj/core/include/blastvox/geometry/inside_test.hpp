#pragma once

#include <vector>

#include "blastvox/geometry/mesh.hpp"

namespace blastvox {

/// Point-in-polyhedron queries by parity of crossings of a +z ray.
///
/// Rays passing exactly through an edge or vertex of the projected mesh are
/// resolved by a symbolic perturbation of the query point, so each crossing
/// is counted exactly once and the parity is always consistent for a closed
/// mesh.
class InsideTester {
 public:
  explicit InsideTester(const TriangleMesh& mesh, int bins = 32);

  bool inside(const Vec3& p) const;

  /// Sorted heights at which the vertical line through (x, y) crosses the
  /// surface. A point at height z is inside iff an odd number of entries
  /// are strictly greater than z.
  void columnCrossings(double x, double y, std::vector<double>& out) const;

  const Aabb& bounds() const { return bounds_; }

 private:
  void crossingsFrom(const std::vector<std::uint32_t>& candidates, double x, double y,
                     std::vector<double>& out) const;

  const TriangleMesh* mesh_;
  Aabb bounds_;
  int bins_;
  double bin_w_[2];
  std::vector<std::vector<std::uint32_t>> bin_tris_;
};

/// True iff the ray crosses triangle `t` of `mesh` at the vertical line
/// through (x, y); `z` receives the crossing height.
bool columnHitsTriangle(const TriangleMesh& mesh, const Triangle& t, double x, double y, double& z);

/// Number of entries in sorted `crossings` strictly above z is odd.
bool insideFromCrossings(const std::vector<double>& crossings, double z);

}  // namespace blastvox
