#include "blastvox/simcli/render.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

#include "blastvox/effects/splat.hpp"
#include "blastvox/errors.hpp"
#include "blastvox/fluidcore/parallel.hpp"

namespace blastvox {

namespace {

std::string exact(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

Camera validated(const Camera& c) {
  if (c.width <= 0 || c.height <= 0) throw ConfigError("image size must be positive");
  if ((c.look_at - c.position).norm() == 0.0) throw ConfigError("camera position and target coincide");
  return c;
}

}  // namespace

SliceImage renderRefraction(const Snapshot& snap, const RefractionRenderOptions& o) {
  const Camera cam = validated(o.camera);
  if (!(o.checker_degrees > 0.0)) throw ConfigError("checker size must be positive");
  ScalarVolume volume = ScalarVolume::density(snap.toGrid());
  if (o.refraction.smoothing_passes > 0) volume = volume.smoothed(o.refraction.smoothing_passes);

  const Vec3 fwd = (cam.look_at - cam.position).normalized();
  const Vec3 right = fwd.cross(cam.up).normalized();
  const Vec3 down = fwd.cross(right);
  const double deg = 180.0 / std::numbers::pi;

  SliceImage out;
  out.image = Image8(cam.width, cam.height);
  std::vector<double> deflection(std::size_t(cam.width) * cam.height, 0.0);
  parallel::forRange(0, std::size_t(cam.height), [&](std::size_t y) {
    for (int x = 0; x < cam.width; ++x) {
      const Ray ray = cam.pixelRay(x, static_cast<double>(y));
      const RayPath path = refractRay(volume, ray, o.refraction);
      const Vec3& d = path.direction;
      const double yaw = std::atan2(d.dot(right), d.dot(fwd)) * deg;
      const double pitch = std::atan2(d.dot(down), d.dot(fwd)) * deg;
      const long cell = static_cast<long>(std::floor(yaw / o.checker_degrees)) +
                        static_cast<long>(std::floor(pitch / o.checker_degrees));
      const std::uint8_t v = (cell & 1) ? 60 : 200;
      std::uint8_t* px = out.image.pixel(x, static_cast<int>(y));
      px[0] = px[1] = px[2] = v;
      deflection[y * cam.width + x] = std::acos(std::clamp(d.dot(ray.direction), -1.0, 1.0)) * deg;
    }
  });
  double max_deflection = 0.0;
  for (const double a : deflection) max_deflection = std::max(max_deflection, a);
  out.metadata["field"] = "refraction";
  out.metadata["max_deflection_degrees"] = exact(max_deflection);
  out.metadata["exaggeration"] = exact(o.refraction.exaggeration);
  out.metadata["time"] = exact(snap.time);
  out.metadata["step"] = std::to_string(snap.step);
  return out;
}

SliceImage renderParticles(const Snapshot& snap, const ParticleRenderOptions& o) {
  const Camera cam = validated(o.camera);
  std::vector<SplatParticle> particles;
  for (const TracerParticle& t : snap.tracers) particles.push_back({t.position, t.color, o.tracer_radius});
  std::size_t dust = 0;
  if (o.dust) {
    for (const DustMetaParticle& d : snap.dust) {
      particles.push_back({d.center, o.dust_color, std::max(o.tracer_radius, std::sqrt(d.variance))});
      ++dust;
    }
  }
  const RgbaImage background(cam.width, cam.height, Rgba{0.0, 0.0, 0.0, 1.0});
  SliceImage out;
  out.image = toImage8(splatParticles(particles, cam, background));
  out.metadata["field"] = "particles";
  out.metadata["tracers"] = std::to_string(snap.tracers.size());
  out.metadata["dust"] = std::to_string(dust);
  out.metadata["time"] = exact(snap.time);
  out.metadata["step"] = std::to_string(snap.step);
  return out;
}

}  // namespace blastvox
