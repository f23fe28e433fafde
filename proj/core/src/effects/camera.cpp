#include "blastvox/effects/camera.hpp"

#include <cmath>
#include <numbers>

namespace blastvox {

double Camera::focalPixels() const {
  return 0.5 * height / std::tan(0.5 * fov_y_degrees * std::numbers::pi / 180.0);
}

void Camera::basis(Vec3& forward, Vec3& right, Vec3& down) const {
  forward = (look_at - position).normalized();
  right = forward.cross(up).normalized();
  down = forward.cross(right);
}

Ray Camera::pixelRay(double x, double y) const {
  Vec3 f, r, d;
  basis(f, r, d);
  const double fp = focalPixels();
  const Vec3 dir = f * fp + r * (x + 0.5 - 0.5 * width) + d * (y + 0.5 - 0.5 * height);
  return Ray{position, dir.normalized()};
}

std::optional<Camera::Projection> Camera::project(const Vec3& p) const {
  Vec3 f, r, d;
  basis(f, r, d);
  const Vec3 rel = p - position;
  const double depth = rel.dot(f);
  if (depth <= 0.0) return std::nullopt;
  const double fp = focalPixels();
  return Projection{0.5 * width - 0.5 + fp * rel.dot(r) / depth, 0.5 * height - 0.5 + fp * rel.dot(d) / depth, depth};
}

}  // namespace blastvox
