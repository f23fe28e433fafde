#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace blastvox {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Quat = Eigen::Quaterniond;

/// Integer lattice coordinate of a voxel.
struct Index3 {
  int i = 0;
  int j = 0;
  int k = 0;

  int operator[](int axis) const { return axis == 0 ? i : (axis == 1 ? j : k); }
  int& operator[](int axis) { return axis == 0 ? i : (axis == 1 ? j : k); }
  friend bool operator==(const Index3&, const Index3&) = default;
};

/// Lattice extents. Linear index is x-fastest: i + nx * (j + ny * k).
struct GridDims {
  int nx = 0;
  int ny = 0;
  int nz = 0;

  int operator[](int axis) const { return axis == 0 ? nx : (axis == 1 ? ny : nz); }
  std::size_t count() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) * static_cast<std::size_t>(nz);
  }
  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(nx) * (static_cast<std::size_t>(j) + static_cast<std::size_t>(ny) * static_cast<std::size_t>(k));
  }
  std::size_t index(const Index3& c) const { return index(c.i, c.j, c.k); }
  Index3 coord(std::size_t idx) const {
    const auto sx = static_cast<std::size_t>(nx);
    const auto sy = static_cast<std::size_t>(ny);
    Index3 c;
    c.i = static_cast<int>(idx % sx);
    idx /= sx;
    c.j = static_cast<int>(idx % sy);
    c.k = static_cast<int>(idx / sy);
    return c;
  }
  bool contains(int i, int j, int k) const {
    return i >= 0 && j >= 0 && k >= 0 && i < nx && j < ny && k < nz;
  }
  bool contains(const Index3& c) const { return contains(c.i, c.j, c.k); }
  /// Stride of the linear index along an axis.
  std::size_t stride(int axis) const {
    if (axis == 0) return 1;
    if (axis == 1) return static_cast<std::size_t>(nx);
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  }
  friend bool operator==(const GridDims&, const GridDims&) = default;
};

}  // namespace blastvox
