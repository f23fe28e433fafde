#include "blastvox/geometry/primitives.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <tuple>

#include "blastvox/errors.hpp"

namespace blastvox {

TriangleMesh makeBox(const Vec3& lo, const Vec3& hi) {
  TriangleMesh m;
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i) m.vertices.emplace_back(i ? hi.x() : lo.x(), j ? hi.y() : lo.y(), k ? hi.z() : lo.z());
  // vertex index = i + 2j + 4k
  const auto quad = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d) {
    m.triangles.push_back({a, b, c});
    m.triangles.push_back({a, c, d});
  };
  quad(0, 2, 3, 1);  // z min
  quad(4, 5, 7, 6);  // z max
  quad(0, 1, 5, 4);  // y min
  quad(2, 6, 7, 3);  // y max
  quad(0, 4, 6, 2);  // x min
  quad(1, 3, 7, 5);  // x max
  return m;
}

TriangleMesh makeSphere(const Vec3& center, double radius, int n) {
  if (n < 1) throw ConfigError("sphere resolution must be at least 1");
  TriangleMesh m;
  std::map<std::tuple<int, int, int>, std::uint32_t> ids;
  const auto vertex = [&](int x, int y, int z) {
    const auto key = std::make_tuple(x, y, z);
    const auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    // Sum the squares in sorted order so mirrored and permuted vertices get
    // bit-identical lengths.
    std::array<double, 3> a{std::abs(double(x)), std::abs(double(y)), std::abs(double(z))};
    std::sort(a.begin(), a.end());
    const double len = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
    const Vec3 unit(x / len, y / len, z / len);
    const auto id = static_cast<std::uint32_t>(m.vertices.size());
    m.vertices.push_back(center + radius * unit);
    ids.emplace(key, id);
    return id;
  };
  for (int sz = -1; sz <= 1; sz += 2) {
    for (int sy = -1; sy <= 1; sy += 2) {
      for (int sx = -1; sx <= 1; sx += 2) {
        const bool flip = sx * sy * sz < 0;
        const auto at = [&](int i, int j) { return vertex(sx * i, sy * j, sz * (n - i - j)); };
        const auto emit = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c) {
          if (flip) m.triangles.push_back({a, c, b});
          else m.triangles.push_back({a, b, c});
        };
        for (int i = 0; i < n; ++i) {
          for (int j = 0; i + j < n; ++j) {
            emit(at(i, j), at(i + 1, j), at(i, j + 1));
            if (i + j + 2 <= n) emit(at(i + 1, j), at(i + 1, j + 1), at(i, j + 1));
          }
        }
      }
    }
  }
  return m;
}

TriangleMesh makeCylinder(const Vec3& center, double radius, double height, int segments) {
  if (segments < 3) throw ConfigError("cylinder needs at least 3 segments");
  TriangleMesh m;
  const double z0 = center.z() - 0.5 * height;
  const double z1 = center.z() + 0.5 * height;
  const auto s = static_cast<std::uint32_t>(segments);
  for (std::uint32_t i = 0; i < s; ++i) {
    const double a = 2.0 * std::numbers::pi * i / s;
    const double x = center.x() + radius * std::cos(a);
    const double y = center.y() + radius * std::sin(a);
    m.vertices.emplace_back(x, y, z0);
    m.vertices.emplace_back(x, y, z1);
  }
  const std::uint32_t bottom = 2 * s;
  const std::uint32_t top = 2 * s + 1;
  m.vertices.emplace_back(center.x(), center.y(), z0);
  m.vertices.emplace_back(center.x(), center.y(), z1);
  for (std::uint32_t i = 0; i < s; ++i) {
    const std::uint32_t j = (i + 1) % s;
    const std::uint32_t b0 = 2 * i, t0 = 2 * i + 1, b1 = 2 * j, t1 = 2 * j + 1;
    m.triangles.push_back({b0, b1, t1});
    m.triangles.push_back({b0, t1, t0});
    m.triangles.push_back({bottom, b1, b0});
    m.triangles.push_back({top, t0, t1});
  }
  return m;
}

TriangleMesh makeTorus(const Vec3& center, double major_radius, double minor_radius, int major_segments,
                       int minor_segments) {
  if (major_segments < 3 || minor_segments < 3) throw ConfigError("torus needs at least 3 segments per ring");
  if (minor_radius <= 0.0 || minor_radius >= major_radius) throw ConfigError("torus radii must satisfy 0 < minor < major");
  TriangleMesh m;
  const auto nu = static_cast<std::uint32_t>(major_segments);
  const auto nv = static_cast<std::uint32_t>(minor_segments);
  for (std::uint32_t i = 0; i < nu; ++i) {
    const double u = 2.0 * std::numbers::pi * i / nu;
    for (std::uint32_t j = 0; j < nv; ++j) {
      const double v = 2.0 * std::numbers::pi * j / nv;
      const double r = major_radius + minor_radius * std::cos(v);
      m.vertices.push_back(center + Vec3(r * std::cos(u), r * std::sin(u), minor_radius * std::sin(v)));
    }
  }
  const auto id = [&](std::uint32_t i, std::uint32_t j) { return (i % nu) * nv + (j % nv); };
  for (std::uint32_t i = 0; i < nu; ++i) {
    for (std::uint32_t j = 0; j < nv; ++j) {
      m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return m;
}

TriangleMesh makeWedge(const Vec3& center, double width, double height, double length) {
  TriangleMesh m;
  const double hw = 0.5 * width;
  const double hl = 0.5 * length;
  for (const double y : {-hl, hl}) {
    m.vertices.push_back(center + Vec3(-hw, y, 0.0));
    m.vertices.push_back(center + Vec3(hw, y, 0.0));
    m.vertices.push_back(center + Vec3(0.0, y, height));
  }
  // 0,1,2 at -y; 3,4,5 at +y
  m.triangles = {{0, 1, 2}, {3, 5, 4}, {0, 4, 1}, {0, 3, 4}, {1, 5, 2}, {1, 4, 5}, {2, 3, 0}, {2, 5, 3}};
  return m;
}

TriangleMesh scaledToVolume(const TriangleMesh& mesh, double volume, const Vec3& pivot) {
  const double v = mesh.signedVolume();
  if (!(v > 0.0) || !(volume > 0.0)) throw ConfigError("cannot scale a mesh without positive volume");
  return mesh.scaled(std::cbrt(volume / v), pivot);
}

}  // namespace blastvox
