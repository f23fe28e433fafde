#include "blastvox/effects/refraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "blastvox/coupling/sampling.hpp"

namespace blastvox {

ScalarVolume ScalarVolume::density(const FluidGrid& grid) {
  ScalarVolume v;
  v.dims = grid.dims();
  v.h = grid.h();
  v.origin = grid.origin();
  const auto cells = grid.current();
  v.values.resize(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) v.values[i] = cells[i].rho;
  return v;
}

bool ScalarVolume::contains(const Vec3& p) const {
  const Vec3 hi = extentMax();
  return (p.array() >= origin.array()).all() && (p.array() <= hi.array()).all();
}

double ScalarVolume::sample(const Vec3& p) const { return sampleScalar(dims, h, origin, values, p); }

Vec3 ScalarVolume::gradient(const Vec3& p) const {
  Vec3 g;
  for (int a = 0; a < 3; ++a) {
    Vec3 e = Vec3::Zero();
    e[a] = h;
    g[a] = (sample(p + e) - sample(p - e)) / (2.0 * h);
  }
  return g;
}

ScalarVolume ScalarVolume::smoothed(int passes) const {
  ScalarVolume cur = *this;
  for (int pass = 0; pass < passes; ++pass) {
    ScalarVolume next = cur;
    for (int k = 0; k < dims.nz; ++k)
      for (int j = 0; j < dims.ny; ++j)
        for (int i = 0; i < dims.nx; ++i) {
          double sum = 0.0;
          int n = 0;
          for (int dk = -1; dk <= 1; ++dk)
            for (int dj = -1; dj <= 1; ++dj)
              for (int di = -1; di <= 1; ++di) {
                if (!dims.contains(i + di, j + dj, k + dk)) continue;
                sum += cur.values[dims.index(i + di, j + dj, k + dk)];
                ++n;
              }
          next.values[dims.index(i, j, k)] = sum / n;
        }
    cur = std::move(next);
  }
  return cur;
}

Vec3 snellRefract(const Vec3& d, const Vec3& n_in, double eta1, double eta2, bool* reflected) {
  Vec3 n = n_in.normalized();
  double cos1 = n.dot(d);
  if (cos1 < 0.0) {
    n = -n;
    cos1 = -cos1;
  }
  const double r = eta1 / eta2;
  const double sin2_t = r * r * std::max(0.0, 1.0 - cos1 * cos1);
  if (sin2_t > 1.0) {
    if (reflected) *reflected = true;
    return (d - 2.0 * cos1 * n).normalized();
  }
  if (reflected) *reflected = false;
  const double cos2 = std::sqrt(1.0 - sin2_t);
  return (r * d + (cos2 - r * cos1) * n).normalized();
}

std::optional<std::pair<double, double>> intersectBox(const Vec3& lo, const Vec3& hi, const Ray& ray) {
  double t0 = 0.0;
  double t1 = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    const double o = ray.origin[a];
    const double d = ray.direction[a];
    if (d == 0.0) {
      if (o < lo[a] || o > hi[a]) return std::nullopt;
      continue;
    }
    double ta = (lo[a] - o) / d;
    double tb = (hi[a] - o) / d;
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return std::nullopt;
  }
  return std::make_pair(t0, t1);
}

RayPath refractRay(const ScalarVolume& density, const Ray& ray, const RefractionConfig& config) {
  RayPath path;
  path.position = ray.origin;
  path.direction = ray.direction.normalized();
  const ScalarVolume smoothed = config.smoothing_passes > 0 ? density.smoothed(config.smoothing_passes) : ScalarVolume{};
  const ScalarVolume& field = config.smoothing_passes > 0 ? smoothed : density;
  const auto hit = intersectBox(density.origin, density.extentMax(), Ray{ray.origin, path.direction});
  if (!hit) return path;

  const double step = config.step > 0.0 ? config.step : 0.25 * density.h;
  const auto eta = [&](const Vec3& p) {
    return refractiveIndex(density.sample(p), config.k_gladstone, config.exaggeration);
  };
  Vec3 p = ray.origin + hit->first * path.direction;
  double eta_last = eta(p);
  double eta_now = eta_last;
  Vec3 last_normal = Vec3::Zero();
  if (config.record_path) path.points.push_back(p);

  for (std::size_t s = 0; s < config.max_steps; ++s) {
    const Vec3 q = p + step * path.direction;
    if (!density.contains(q)) break;
    p = q;
    eta_now = eta(p);
    if (std::abs(eta_now - eta_last) > config.bend_threshold) {
      const Vec3 g = field.gradient(p);
      if (g.squaredNorm() > 0.0) {
        bool refl = false;
        path.direction = snellRefract(path.direction, g, eta_last, eta_now, &refl);
        last_normal = g;
        eta_last = eta_now;
        ++path.bends;
        if (refl) ++path.reflections;
      }
    }
    if (config.record_path) path.points.push_back(p);
  }
  if (eta_now != eta_last && last_normal.squaredNorm() > 0.0) {
    bool refl = false;
    path.direction = snellRefract(path.direction, last_normal, eta_last, eta_now, &refl);
    eta_last = eta_now;
    ++path.bends;
    if (refl) ++path.reflections;
  }
  path.position = p;
  path.eta = eta_last;
  return path;
}

}  // namespace blastvox
