#pragma once

#include <optional>

#include "blastvox/effects/refraction.hpp"

namespace blastvox {

/// Pinhole camera.
struct Camera {
  Vec3 position = Vec3(0.0, -10.0, 0.0);
  Vec3 look_at = Vec3::Zero();
  Vec3 up = Vec3::UnitZ();
  double fov_y_degrees = 45.0;
  int width = 256;
  int height = 256;

  /// Focal length in pixels.
  double focalPixels() const;
  /// Primary ray through the centre of pixel (x, y); y grows downwards.
  Ray pixelRay(double x, double y) const;

  struct Projection {
    double x;      // pixel coordinates of the projected point
    double y;
    double depth;  // distance along the view axis
  };
  /// Projection of a world point, or nothing when it lies behind the camera.
  std::optional<Projection> project(const Vec3& p) const;

 private:
  void basis(Vec3& forward, Vec3& right, Vec3& down) const;
};

}  // namespace blastvox
